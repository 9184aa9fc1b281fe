#pragma once

#include <cmath>
#include <ostream>

namespace qnesn {

/// Hypercomplex scalar a + b i + c j + d k over doubles.
///
/// Multiplication is the Hamilton product: non-commutative but associative
/// and distributive over addition, with |q1*q2| = |q1|*|q2|.
struct Quaternion {
    double a{0.0};  // real part
    double b{0.0};  // i coefficient
    double c{0.0};  // j coefficient
    double d{0.0};  // k coefficient

    constexpr Quaternion() = default;
    constexpr Quaternion(double a_, double b_, double c_, double d_)
        : a(a_), b(b_), c(c_), d(d_) {}

    static constexpr Quaternion zero() { return {0.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion& operator+=(const Quaternion& r) {
        a += r.a; b += r.b; c += r.c; d += r.d;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& r) {
        a -= r.a; b -= r.b; c -= r.c; d -= r.d;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        a *= s; b *= s; c *= s; d *= s;
        return *this;
    }

    friend constexpr Quaternion operator+(Quaternion l, const Quaternion& r) { return l += r; }
    friend constexpr Quaternion operator-(Quaternion l, const Quaternion& r) { return l -= r; }
    friend constexpr Quaternion operator*(Quaternion l, double s) { return l *= s; }
    friend constexpr Quaternion operator*(double s, Quaternion r) { return r *= s; }
    friend constexpr Quaternion operator-(const Quaternion& q) { return {-q.a, -q.b, -q.c, -q.d}; }

    // Hamilton product.
    friend constexpr Quaternion operator*(const Quaternion& l, const Quaternion& r) {
        return {l.a * r.a - l.b * r.b - l.c * r.c - l.d * r.d,
                l.a * r.b + l.b * r.a + l.c * r.d - l.d * r.c,
                l.a * r.c - l.b * r.d + l.c * r.a + l.d * r.b,
                l.a * r.d + l.b * r.c - l.c * r.b + l.d * r.a};
    }

    constexpr double norm_sq() const { return a * a + b * b + c * c + d * d; }
    double norm() const { return std::sqrt(norm_sq()); }

    friend std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
        return os << '(' << q.a << ',' << q.b << ',' << q.c << ',' << q.d << ')';
    }
};

constexpr Quaternion hamilton_product(const Quaternion& q1, const Quaternion& q2) {
    return q1 * q2;
}

/// Applies a real scalar function to each of the four components.
template <typename F>
Quaternion split_apply(F&& f, const Quaternion& q) {
    return {f(q.a), f(q.b), f(q.c), f(q.d)};
}

inline Quaternion split_tanh(const Quaternion& q) {
    return {std::tanh(q.a), std::tanh(q.b), std::tanh(q.c), std::tanh(q.d)};
}

// Scalar-generic helpers so reservoir/readout templates cover both modes.
inline double activation_tanh(double x) { return std::tanh(x); }
inline Quaternion activation_tanh(const Quaternion& q) { return split_tanh(q); }

constexpr double scalar_zero(double) { return 0.0; }
constexpr Quaternion scalar_zero(const Quaternion&) { return Quaternion::zero(); }

}  // namespace qnesn

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qnesn/mat.hpp"
#include "qnesn/quaternion.hpp"
#include "qnesn/reservoir.hpp"
#include "qnesn/types.hpp"

namespace qnesn {

/// Linear output layer y = W_out z.
template <typename S>
struct LinearReadout {
    Mat<S> w_out;  // n_outputs x readout width
};

/// Bilinear output layer of order N over a width-M readout input:
///   y_p(t) = sum_i c(p,i) y_p(t-i)
///          + sum_i sum_j b^p(i,j) y_p(t-i) z_j(t)
///          + sum_j a(p,j) z_j(t)
/// In quaternion mode every product is a Hamilton product and the cross term
/// keeps the operand order y (x) b (x) z, evaluated left to right.
template <typename S>
struct BilinearCoeffs {
    std::size_t order{2};              // N >= 2; the filter remembers N-1 outputs
    Mat<S> a;                          // n_outputs x M
    std::vector<Mat<S>> b;             // n_outputs blocks, each (N-1) x M
    Mat<S> c;                          // n_outputs x (N-1)

    std::size_t n_outputs() const { return a.rows(); }
    std::size_t width() const { return a.cols(); }

    void validate() const {
        if (order < 2) throw std::invalid_argument("bilinear: order must be >= 2");
        if (b.size() != a.rows()) throw std::invalid_argument("bilinear: B needs one block per output");
        for (const auto& bp : b)
            if (bp.rows() != order - 1 || bp.cols() != a.cols())
                throw std::invalid_argument("bilinear: B block shape mismatch");
        if (c.rows() != a.rows() || c.cols() != order - 1)
            throw std::invalid_argument("bilinear: C shape mismatch");
    }
};

/// Per-sequence output history: hist[p][i] = y_p(t-1-i), zero before t = 0.
template <typename S>
struct BilinearState {
    std::vector<std::vector<S>> hist;

    BilinearState() = default;
    BilinearState(std::size_t n_outputs, std::size_t order)
        : hist(n_outputs, std::vector<S>(order - 1, S{})) {}

    void push(const std::vector<S>& y) {
        for (std::size_t p = 0; p < hist.size(); ++p) {
            auto& h = hist[p];
            for (std::size_t i = h.size(); i-- > 1;) h[i] = h[i - 1];
            if (!h.empty()) h[0] = y[p];
        }
    }
};

/// Assembles the vector fed to the output layer: [x; 1] or [x; u; 1].
template <typename S>
std::vector<S> readout_input(const std::vector<S>& x, const std::vector<S>& u,
                             ReadoutStructure structure) {
    std::vector<S> z;
    z.reserve(x.size() + (structure == ReadoutStructure::state_plus_input ? u.size() : 0) + 1);
    z.insert(z.end(), x.begin(), x.end());
    if (structure == ReadoutStructure::state_plus_input) z.insert(z.end(), u.begin(), u.end());
    z.push_back(bias_value<S>());
    return z;
}

template <typename S>
std::vector<S> linear_forward(const LinearReadout<S>& r, const std::vector<S>& z) {
    return r.w_out.matvec(z);
}

template <typename S>
std::vector<S> bilinear_forward(const BilinearCoeffs<S>& coeffs, const BilinearState<S>& state,
                                const std::vector<S>& z) {
    const std::size_t n_y = coeffs.n_outputs();
    const std::size_t m = coeffs.width();
    const std::size_t lags = coeffs.order - 1;
    if (z.size() != m) throw std::invalid_argument("bilinear_forward: input width mismatch");
    if (state.hist.size() != n_y) throw std::invalid_argument("bilinear_forward: history dims mismatch");
    std::vector<S> y(n_y, S{});
    for (std::size_t p = 0; p < n_y; ++p) {
        if (state.hist[p].size() != lags)
            throw std::invalid_argument("bilinear_forward: history depth mismatch");
        S acc{};
        for (std::size_t i = 0; i < lags; ++i) acc += coeffs.c(p, i) * state.hist[p][i];
        const Mat<S>& bp = coeffs.b[p];
        for (std::size_t i = 0; i < lags; ++i) {
            const S& y_past = state.hist[p][i];
            for (std::size_t j = 0; j < m; ++j) acc += (y_past * bp(i, j)) * z[j];
        }
        for (std::size_t j = 0; j < m; ++j) acc += coeffs.a(p, j) * z[j];
        y[p] = acc;
    }
    return y;
}

/// Runs the filter across a whole sequence with zero-initialized history.
template <typename S>
std::vector<std::vector<S>> bilinear_run(const BilinearCoeffs<S>& coeffs,
                                         const std::vector<std::vector<S>>& inputs) {
    BilinearState<S> state(coeffs.n_outputs(), coeffs.order);
    std::vector<std::vector<S>> out;
    out.reserve(inputs.size());
    for (const auto& z : inputs) {
        out.push_back(bilinear_forward(coeffs, state, z));
        state.push(out.back());
    }
    return out;
}

/// Flattened form y_p = W_p . U_p with W_p = [C_p, B_p, A_p] and
/// U_p = [Y_p(t-1); V_p(t); z]. Real coefficients only; the quaternion cross
/// term cannot be collapsed this way because b sits between two operands.
struct VectorizedReadout {
    std::vector<double> w;  // coefficient row
    std::vector<double> u;  // data column
};

inline VectorizedReadout vectorize(const BilinearCoeffs<double>& coeffs,
                                   const BilinearState<double>& state,
                                   const std::vector<double>& z, std::size_t p) {
    const std::size_t m = coeffs.width();
    const std::size_t lags = coeffs.order - 1;
    if (z.size() != m) throw std::invalid_argument("vectorize: input width mismatch");
    if (p >= coeffs.n_outputs()) throw std::invalid_argument("vectorize: output index out of range");
    VectorizedReadout v;
    v.w.reserve(lags + lags * m + m);
    v.u.reserve(lags + lags * m + m);
    for (std::size_t i = 0; i < lags; ++i) {
        v.w.push_back(coeffs.c(p, i));
        v.u.push_back(state.hist[p][i]);
    }
    for (std::size_t i = 0; i < lags; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            v.w.push_back(coeffs.b[p](i, j));
            v.u.push_back(state.hist[p][i] * z[j]);
        }
    for (std::size_t j = 0; j < m; ++j) {
        v.w.push_back(coeffs.a(p, j));
        v.u.push_back(z[j]);
    }
    return v;
}

// --- Theta packing -----------------------------------------------------

/// Flat GA genome. Layout is [A, B^1..B^{N_y}, C, W_in, W] for the bilinear
/// models and [W_in, W, W_out] for the linear ones; matrices row-major,
/// quaternion entries as four consecutive reals (a, b, c, d).
using ThetaVector = std::vector<double>;

template <typename S>
struct LinearModelParams {
    Mat<S> w_in;  // n_units x (n_inputs + 1)
    Mat<S> w;     // n_units x n_units
    Mat<S> w_out; // n_outputs x readout width
};

template <typename S>
struct BilinearModelParams {
    Mat<S> w_in;
    Mat<S> w;
    BilinearCoeffs<S> readout;
};

std::size_t theta_length(Model model, const Dims& dims);

ThetaVector theta_pack(const LinearModelParams<double>& p);
ThetaVector theta_pack(const LinearModelParams<Quaternion>& p);
ThetaVector theta_pack(const BilinearModelParams<double>& p);
ThetaVector theta_pack(const BilinearModelParams<Quaternion>& p);

/// Pure layout inverses of theta_pack; no spectral rescaling happens here.
LinearModelParams<double> theta_unpack_linear_real(const ThetaVector& theta, const Dims& dims);
LinearModelParams<Quaternion> theta_unpack_linear_quat(const ThetaVector& theta, const Dims& dims);
BilinearModelParams<double> theta_unpack_bilinear_real(const ThetaVector& theta, const Dims& dims);
BilinearModelParams<Quaternion> theta_unpack_bilinear_quat(const ThetaVector& theta, const Dims& dims);

}  // namespace qnesn

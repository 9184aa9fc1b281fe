#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qnesn/quaternion.hpp"

namespace qnesn {

/// Dense row-major matrix over double or Quaternion.
///
/// Matrix-vector products use the entry's own multiplication, so in
/// quaternion mode every term is a Hamilton product M(i,j) * v[j] with the
/// matrix entry on the left.
template <typename S>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, S{}) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<S>& data() { return data_; }
    const std::vector<S>& data() const { return data_; }

    bool operator==(const Mat&) const = default;

    std::vector<S> matvec(const std::vector<S>& v) const {
        if (v.size() != cols_)
            throw std::invalid_argument("Mat::matvec: size mismatch (" +
                                        std::to_string(cols_) + " cols vs vector of " +
                                        std::to_string(v.size()) + ")");
        std::vector<S> out(rows_, S{});
        for (std::size_t i = 0; i < rows_; ++i) {
            S acc{};
            const S* row = &data_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
            out[i] = acc;
        }
        return out;
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one_value();
        return m;
    }

private:
    static S one_value() {
        if constexpr (std::is_same_v<S, Quaternion>)
            return Quaternion::one();
        else
            return S{1};
    }

    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<S> data_;
};

using RealMat = Mat<double>;
using QuatMat = Mat<Quaternion>;

/// out_i = sum_j M(i,j) (x) v_j with Hamilton products.
inline std::vector<Quaternion> quat_matvec(const QuatMat& m, const std::vector<Quaternion>& v) {
    return m.matvec(v);
}

}  // namespace qnesn

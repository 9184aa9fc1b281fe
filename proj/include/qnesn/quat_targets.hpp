#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace qnesn {

/// Per-class quaternion target matrices D^1..D^{n}: target n is n_classes x 4
/// with row n all ones and every other row zero.
struct QuatTargetSet {
    std::size_t n_classes{0};
    std::vector<Eigen::MatrixXd> targets;
};

inline QuatTargetSet make_targets(std::size_t n_classes) {
    if (n_classes == 0) throw std::invalid_argument("make_targets: n_classes must be >= 1");
    QuatTargetSet set;
    set.n_classes = n_classes;
    set.targets.reserve(n_classes);
    for (std::size_t n = 0; n < n_classes; ++n) {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_classes), 4);
        d.row(static_cast<Eigen::Index>(n)).setOnes();
        set.targets.push_back(std::move(d));
    }
    return set;
}

/// Mean square error in quaternion space: half the sum of squared
/// componentwise differences over all rows.
inline double qmse(const Eigen::MatrixXd& target, const Eigen::MatrixXd& pred) {
    if (target.rows() != pred.rows() || target.cols() != pred.cols())
        throw std::invalid_argument("qmse: shape mismatch");
    return 0.5 * (target - pred).squaredNorm();
}

}  // namespace qnesn

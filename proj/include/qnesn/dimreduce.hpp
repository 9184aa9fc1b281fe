#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qnesn/quaternion.hpp"

namespace qnesn {

/// Orthonormal projection onto the top eigenvectors of the covariance-style
/// matrix Gt, eigenvalues in descending order. Samples are projected without
/// re-centering unless center_at_transform is set.
struct ProjectionBasis {
    Eigen::MatrixXd eigvects;     // M x dim, columns orthonormal
    Eigen::VectorXd eigvals;      // dim, nonincreasing
    Eigen::MatrixXd mean;         // sample mean (r x M; r = 1 for vector PCA)
    std::size_t dim{0};
    double total_variance{0.0};   // trace of Gt
    bool center_at_transform{false};

    double captured_variance() const { return eigvals.sum(); }
};

/// Matrix-sample 2dPCA: Gt = (1/S) sum (X_i - mean)^T (X_i - mean) over
/// r x M samples, basis = top-dim eigenvectors of Gt.
ProjectionBasis fit_2dpca(const std::vector<Eigen::MatrixXd>& samples, std::size_t dim,
                          bool center_at_transform = false);

/// Vector PCA sharing the 2dPCA machinery: rows of `samples` are treated as
/// 1 x M matrix samples, so Gt is the population covariance.
ProjectionBasis fit_pca(const Eigen::MatrixXd& samples, std::size_t dim,
                        bool center_at_transform = false);

/// X' = X * EigVect (r x M -> r x dim).
Eigen::MatrixXd project(const ProjectionBasis& basis, const Eigen::MatrixXd& sample);
Eigen::VectorXd project_vector(const ProjectionBasis& basis, const Eigen::VectorXd& sample);

/// Quaternion helpers: a length-M quaternion vector maps to the 4 x M real
/// matrix whose rows are the a, b, c, d component lanes.
Eigen::MatrixXd components_matrix(const std::vector<Quaternion>& v);
std::vector<Quaternion> quaternions_from_components(const Eigen::MatrixXd& m);

}  // namespace qnesn

#include "qnesn/dimreduce.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace qnesn {

namespace {

// Deterministic sign convention: the entry with the largest magnitude in
// each eigenvector is made positive (first such index on ties).
void fix_signs(Eigen::MatrixXd& vects) {
    for (Eigen::Index c = 0; c < vects.cols(); ++c) {
        Eigen::Index imax = 0;
        vects.col(c).cwiseAbs().maxCoeff(&imax);
        if (vects(imax, c) < 0.0) vects.col(c) = -vects.col(c);
    }
}

ProjectionBasis basis_from_gt(const Eigen::MatrixXd& gt, const Eigen::MatrixXd& mean,
                              std::size_t dim, bool center_at_transform) {
    const auto m = gt.rows();
    if (dim == 0 || static_cast<Eigen::Index>(dim) > m)
        throw std::invalid_argument("dimreduce: dim must lie in [1, " + std::to_string(m) + "]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gt);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dimreduce: eigendecomposition failed");

    ProjectionBasis basis;
    basis.dim = dim;
    basis.mean = mean;
    basis.center_at_transform = center_at_transform;
    basis.total_variance = gt.trace();
    basis.eigvects.resize(m, static_cast<Eigen::Index>(dim));
    basis.eigvals.resize(static_cast<Eigen::Index>(dim));
    // SelfAdjointEigenSolver returns ascending order; take the top slice.
    for (std::size_t k = 0; k < dim; ++k) {
        const auto src = m - 1 - static_cast<Eigen::Index>(k);
        basis.eigvects.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(src);
        basis.eigvals(static_cast<Eigen::Index>(k)) = solver.eigenvalues()(src);
    }
    fix_signs(basis.eigvects);
    return basis;
}

}  // namespace

ProjectionBasis fit_2dpca(const std::vector<Eigen::MatrixXd>& samples, std::size_t dim,
                          bool center_at_transform) {
    if (samples.empty()) throw std::invalid_argument("fit_2dpca: no samples");
    const auto rows = samples.front().rows();
    const auto cols = samples.front().cols();
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& s : samples) {
        if (s.rows() != rows || s.cols() != cols)
            throw std::invalid_argument("fit_2dpca: inconsistent sample shapes");
        mean += s;
    }
    mean /= static_cast<double>(samples.size());

    Eigen::MatrixXd gt = Eigen::MatrixXd::Zero(cols, cols);
    for (const auto& s : samples) {
        Eigen::MatrixXd centered = s - mean;
        gt.noalias() += centered.transpose() * centered;
    }
    gt /= static_cast<double>(samples.size());
    return basis_from_gt(gt, mean, dim, center_at_transform);
}

ProjectionBasis fit_pca(const Eigen::MatrixXd& samples, std::size_t dim,
                        bool center_at_transform) {
    if (samples.rows() == 0) throw std::invalid_argument("fit_pca: no samples");
    Eigen::RowVectorXd mean = samples.colwise().mean();
    Eigen::MatrixXd centered = samples.rowwise() - mean;
    Eigen::MatrixXd gt =
        (centered.transpose() * centered) / static_cast<double>(samples.rows());
    return basis_from_gt(gt, mean, dim, center_at_transform);
}

Eigen::MatrixXd project(const ProjectionBasis& basis, const Eigen::MatrixXd& sample) {
    if (sample.cols() != basis.eigvects.rows())
        throw std::invalid_argument("project: sample width does not match basis");
    if (basis.center_at_transform) return (sample - basis.mean) * basis.eigvects;
    return sample * basis.eigvects;
}

Eigen::VectorXd project_vector(const ProjectionBasis& basis, const Eigen::VectorXd& sample) {
    if (sample.size() != basis.eigvects.rows())
        throw std::invalid_argument("project_vector: sample width does not match basis");
    if (basis.center_at_transform)
        return basis.eigvects.transpose() * (sample - basis.mean.row(0).transpose());
    return basis.eigvects.transpose() * sample;
}

Eigen::MatrixXd components_matrix(const std::vector<Quaternion>& v) {
    Eigen::MatrixXd m(4, static_cast<Eigen::Index>(v.size()));
    for (std::size_t j = 0; j < v.size(); ++j) {
        m(0, static_cast<Eigen::Index>(j)) = v[j].a;
        m(1, static_cast<Eigen::Index>(j)) = v[j].b;
        m(2, static_cast<Eigen::Index>(j)) = v[j].c;
        m(3, static_cast<Eigen::Index>(j)) = v[j].d;
    }
    return m;
}

std::vector<Quaternion> quaternions_from_components(const Eigen::MatrixXd& m) {
    if (m.rows() != 4) throw std::invalid_argument("quaternions_from_components: need 4 rows");
    std::vector<Quaternion> v(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        v[static_cast<std::size_t>(j)] = {m(0, j), m(1, j), m(2, j), m(3, j)};
    return v;
}

}  // namespace qnesn

#include "qnesn/reservoir.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <random>

namespace qnesn {

void ReservoirParams::validate() const {
    if (n_units == 0) throw std::invalid_argument("reservoir: n_units must be >= 1");
    if (n_inputs == 0) throw std::invalid_argument("reservoir: n_inputs must be >= 1");
    if (spectral_radius < 0.0 || spectral_radius >= 1.0)
        throw std::invalid_argument("reservoir: spectral radius must lie in [0, 1) to keep the echo property");
    if (leaking_rate <= 0.0 || leaking_rate > 1.0)
        throw std::invalid_argument("reservoir: leaking rate must lie in (0, 1]");
    if (ridge_c < 0.0) throw std::invalid_argument("reservoir: ridge coefficient must be >= 0");
    if (density <= 0.0 || density > 1.0)
        throw std::invalid_argument("reservoir: density must lie in (0, 1]");
}

double spectral_radius(const Mat<double>& m) {
    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::MatrixXd e(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(e, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const Mat<Quaternion>& m) {
    // Left-multiplication real-adjoint: each entry q expands to the 4x4
    // block mapping component vectors of v to components of q (x) v.
    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Quaternion& q = m(i, j);
            adj.block<4, 4>(4 * i, 4 * j) << q.a, -q.b, -q.c, -q.d,
                                             q.b,  q.a, -q.d,  q.c,
                                             q.c,  q.d,  q.a, -q.b,
                                             q.d, -q.c,  q.b,  q.a;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(adj, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// Entries are drawn as scale * U(-1, 1) so the stream stays identical when a
// scale happens to be zero.
template <typename S, typename Draw>
void fill_uniform(Mat<S>& m, Draw&& draw) {
    for (auto& e : m.data()) e = draw();
}

template <typename S>
void apply_density(Mat<S>& w, double density, std::mt19937_64& rng) {
    if (density >= 1.0) return;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (auto& e : w.data())
        if (u01(rng) >= density) e = S{};
}

}  // namespace

ReservoirWeights<double> init_weights_real(const ReservoirParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    ReservoirWeights<double> weights;
    weights.w_in = Mat<double>(params.n_units, params.n_inputs + 1);
    fill_uniform(weights.w_in, [&] { return params.input_scaling * u(rng); });

    weights.w = Mat<double>(params.n_units, params.n_units);
    fill_uniform(weights.w, [&] { return u(rng); });
    apply_density(weights.w, params.density, rng);
    rescale_spectral_radius(weights.w, params.spectral_radius);
    return weights;
}

ReservoirWeights<Quaternion> init_weights_quat(const ReservoirParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw_quat = [&](double scale) {
        Quaternion q;
        q.a = scale * u(rng);
        q.b = scale * u(rng);
        q.c = scale * u(rng);
        q.d = scale * u(rng);
        return q;
    };

    ReservoirWeights<Quaternion> weights;
    weights.w_in = Mat<Quaternion>(params.n_units, params.n_inputs + 1);
    fill_uniform(weights.w_in, [&] { return draw_quat(params.input_scaling); });

    weights.w = Mat<Quaternion>(params.n_units, params.n_units);
    fill_uniform(weights.w, [&] { return draw_quat(1.0); });
    apply_density(weights.w, params.density, rng);
    rescale_spectral_radius(weights.w, params.spectral_radius);
    return weights;
}

}  // namespace qnesn

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qnesn/mat.hpp"
#include "qnesn/quaternion.hpp"

namespace qnesn {

enum class ReservoirMode { real, quaternion };

/// Reservoir hyperparameters. SR must stay below one so that the echo state
/// property holds; LR interpolates between the previous state and the fresh
/// tanh activation.
struct ReservoirParams {
    std::size_t n_units{0};
    std::size_t n_inputs{0};  // bias column is added on top of this
    double input_scaling{0.5};
    double spectral_radius{0.1};
    double leaking_rate{0.9};
    double ridge_c{100.0};
    double density{1.0};  // fraction of nonzero recurrent weights
    ReservoirMode mode{ReservoirMode::real};
    std::uint64_t seed{0};

    void validate() const;
};

/// w_in is n_units x (n_inputs + 1); w is n_units x n_units rescaled so its
/// spectral radius (real-adjoint spectral radius in quaternion mode) equals
/// the requested SR.
template <typename S>
struct ReservoirWeights {
    Mat<S> w_in;
    Mat<S> w;
};

template <typename S>
struct StateSequence {
    Mat<S> states;  // row t = X(t), t = 0..T-1, evolved from X(-1) = 0
};

ReservoirWeights<double> init_weights_real(const ReservoirParams& params);
ReservoirWeights<Quaternion> init_weights_quat(const ReservoirParams& params);

/// Largest eigenvalue magnitude of a real matrix.
double spectral_radius(const Mat<double>& m);
/// Spectral radius of the 4n x 4n real-adjoint representation.
double spectral_radius(const Mat<Quaternion>& m);

/// Rescales w in place so its spectral radius equals sr (w zeroed when
/// sr == 0). A matrix already at radius ~0 is left untouched.
template <typename S>
void rescale_spectral_radius(Mat<S>& w, double sr) {
    if (sr < 0.0 || sr >= 1.0)
        throw std::invalid_argument("spectral radius must lie in [0, 1)");
    if (sr == 0.0) {
        for (auto& e : w.data()) e = S{};
        return;
    }
    double rho = spectral_radius(w);
    if (rho < 1e-12) return;
    double f = sr / rho;
    for (auto& e : w.data()) e *= f;
}

/// X(t) = (1 - lr) X(t-1) + lr tanh(W_in u + W X(t-1)); u carries the bias
/// element already.
template <typename S>
std::vector<S> step(const ReservoirWeights<S>& weights, double lr,
                    const std::vector<S>& x_prev, const std::vector<S>& u) {
    if (lr < 0.0 || lr > 1.0) throw std::invalid_argument("step: leaking rate outside [0, 1]");
    if (x_prev.size() != weights.w.cols())
        throw std::invalid_argument("step: state size does not match W");
    if (u.size() != weights.w_in.cols())
        throw std::invalid_argument("step: input size does not match W_in");
    std::vector<S> pre = weights.w_in.matvec(u);
    std::vector<S> rec = weights.w.matvec(x_prev);
    std::vector<S> out(x_prev.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - lr) * x_prev[i] + lr * activation_tanh(pre[i] + rec[i]);
    return out;
}

template <typename S>
S bias_value() {
    if constexpr (std::is_same_v<S, Quaternion>)
        return Quaternion::one();
    else
        return 1.0;
}

/// Iterates step over the rows of U (T x n_inputs) from a zero initial
/// state, appending the constant bias element to every input.
template <typename S>
StateSequence<S> run_sequence(const ReservoirWeights<S>& weights, double lr, const Mat<S>& inputs) {
    if (inputs.rows() == 0) throw std::invalid_argument("run_sequence: empty input sequence");
    if (inputs.cols() + 1 != weights.w_in.cols())
        throw std::invalid_argument("run_sequence: input width does not match W_in");
    const std::size_t n = weights.w.rows();
    StateSequence<S> seq;
    seq.states = Mat<S>(inputs.rows(), n);
    std::vector<S> x(n, S{});
    std::vector<S> u(inputs.cols() + 1);
    for (std::size_t t = 0; t < inputs.rows(); ++t) {
        for (std::size_t j = 0; j < inputs.cols(); ++j) u[j] = inputs(t, j);
        u[inputs.cols()] = bias_value<S>();
        x = step(weights, lr, x, u);
        for (std::size_t i = 0; i < n; ++i) seq.states(t, i) = x[i];
    }
    return seq;
}

}  // namespace qnesn

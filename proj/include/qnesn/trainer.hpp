#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qnesn/bilinear.hpp"
#include "qnesn/types.hpp"

namespace qnesn {

/// Generational real-coded GA: stochastic-uniform selection over rank-scaled
/// fitness, scattered crossover, uniform-reset mutation, elitism.
struct GaConfig {
    std::size_t population_size{500};
    double elite_fraction{0.05};
    double crossover_fraction{0.8};
    double mutation_rate{0.01};
    std::size_t max_generations{0};   // 0 -> 100 * n_vars
    std::size_t stall_generations{50};
    double function_tolerance{1e-6};
    double lower_bound{-1.0};
    double upper_bound{1.0};
    double time_budget_seconds{0.0};  // 0 -> unlimited
    std::uint64_t seed{0};

    void validate() const;
};

struct FitnessRecord {
    std::size_t generation{0};
    double best_fitness{0.0};
    double mean_fitness{0.0};
    std::string best_checkpoint;  // filled by callers that persist bests
};

struct GaResult {
    ThetaVector best_theta;
    double best_fitness{0.0};
    std::vector<FitnessRecord> history;
    std::size_t generations{0};
    std::string stop_reason;
};

using Objective = std::function<double(const ThetaVector&)>;

/// Maximizes the objective. Candidates returning non-finite fitness are kept
/// in the population with worst-possible fitness rather than aborting the
/// run. Deterministic for a fixed seed.
GaResult ga_optimize(const Objective& objective, std::size_t n_vars, const GaConfig& cfg);

// --- Ridge readout -------------------------------------------------------------

/// W_out = T Z^T (Z Z^T + c I)^-1 with readout inputs stacked as the columns
/// of Z (width x samples) and targets as columns of T (outputs x samples).
/// c = 0 is accepted only while Z Z^T stays invertible.
Eigen::MatrixXd ridge_readout(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                              double c);

}  // namespace qnesn

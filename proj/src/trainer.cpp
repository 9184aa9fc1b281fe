#include "qnesn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qnesn {

void GaConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("ga: population must be >= 2");
    if (elite_fraction < 0.0 || elite_fraction > 1.0)
        throw std::invalid_argument("ga: elite fraction outside [0, 1]");
    if (crossover_fraction < 0.0 || crossover_fraction > 1.0)
        throw std::invalid_argument("ga: crossover fraction outside [0, 1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
        throw std::invalid_argument("ga: mutation rate outside [0, 1]");
    if (lower_bound >= upper_bound) throw std::invalid_argument("ga: empty gene bounds");
    if (function_tolerance < 0.0) throw std::invalid_argument("ga: negative tolerance");
}

namespace {

constexpr double kWorst = -std::numeric_limits<double>::infinity();

double safe_eval(const Objective& objective, const ThetaVector& theta, std::size_t& bad_count) {
    double f = objective(theta);
    if (!std::isfinite(f)) {
        ++bad_count;
        return kWorst;
    }
    return f;
}

// Stochastic universal sampling over rank-scaled expectations (best rank
// gets weight 1/sqrt(1), next 1/sqrt(2), ...).
std::vector<std::size_t> select_parents(const std::vector<std::size_t>& order, std::size_t count,
                                        std::mt19937_64& rng) {
    const std::size_t n = order.size();
    std::vector<double> expectation(n);
    double total = 0.0;
    for (std::size_t rank = 0; rank < n; ++rank) {
        expectation[rank] = 1.0 / std::sqrt(static_cast<double>(rank + 1));
        total += expectation[rank];
    }
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double step = total / static_cast<double>(count);
    double pointer = u01(rng) * step;
    std::vector<std::size_t> picks;
    picks.reserve(count);
    double cum = 0.0;
    std::size_t rank = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double target = pointer + static_cast<double>(i) * step;
        while (rank + 1 < n && cum + expectation[rank] < target) {
            cum += expectation[rank];
            ++rank;
        }
        picks.push_back(order[rank]);
    }
    std::shuffle(picks.begin(), picks.end(), rng);
    return picks;
}

}  // namespace

GaResult ga_optimize(const Objective& objective, std::size_t n_vars, const GaConfig& cfg) {
    if (n_vars == 0) throw std::invalid_argument("ga: n_vars must be >= 1");
    cfg.validate();
    const auto start_time = std::chrono::steady_clock::now();
    const std::size_t max_gens =
        cfg.max_generations > 0 ? cfg.max_generations : 100 * n_vars;
    const std::size_t pop_size = cfg.population_size;
    const std::size_t n_elite = std::min(
        pop_size, static_cast<std::size_t>(std::ceil(cfg.elite_fraction * pop_size)));
    const std::size_t n_children = pop_size - n_elite;
    const std::size_t n_xover =
        static_cast<std::size_t>(std::llround(cfg.crossover_fraction * n_children));
    const std::size_t n_mut = n_children - n_xover;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> gene(cfg.lower_bound, cfg.upper_bound);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<ThetaVector> pop(pop_size, ThetaVector(n_vars));
    for (auto& ind : pop)
        for (auto& g : ind) g = gene(rng);

    std::size_t bad_count = 0;
    std::vector<double> fitness(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) fitness[i] = safe_eval(objective, pop[i], bad_count);

    GaResult result;
    auto record = [&](std::size_t gen) {
        std::size_t best = 0;
        double sum = 0.0;
        std::size_t finite = 0;
        for (std::size_t i = 0; i < pop_size; ++i) {
            if (fitness[i] > fitness[best]) best = i;
            if (std::isfinite(fitness[i])) {
                sum += fitness[i];
                ++finite;
            }
        }
        FitnessRecord rec;
        rec.generation = gen;
        rec.best_fitness = fitness[best];
        rec.mean_fitness = finite > 0 ? sum / static_cast<double>(finite) : kWorst;
        result.history.push_back(rec);
        if (result.history.size() == 1 || rec.best_fitness > result.best_fitness) {
            result.best_fitness = rec.best_fitness;
            result.best_theta = pop[best];
        }
    };
    record(0);

    std::vector<std::size_t> order(pop_size);
    for (std::size_t gen = 1; gen <= max_gens; ++gen) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

        std::vector<ThetaVector> next;
        std::vector<double> next_fitness;
        next.reserve(pop_size);
        next_fitness.reserve(pop_size);
        for (std::size_t e = 0; e < n_elite; ++e) {
            next.push_back(pop[order[e]]);
            next_fitness.push_back(fitness[order[e]]);
        }

        auto parents = select_parents(order, 2 * n_xover + n_mut, rng);
        std::size_t pi = 0;
        for (std::size_t k = 0; k < n_xover; ++k) {
            const ThetaVector& pa = pop[parents[pi++]];
            const ThetaVector& pb = pop[parents[pi++]];
            ThetaVector child(n_vars);
            for (std::size_t g = 0; g < n_vars; ++g)
                child[g] = (u01(rng) < 0.5) ? pa[g] : pb[g];  // scattered mask
            next_fitness.push_back(safe_eval(objective, child, bad_count));
            next.push_back(std::move(child));
        }
        for (std::size_t k = 0; k < n_mut; ++k) {
            ThetaVector child = pop[parents[pi++]];
            for (auto& g : child)
                if (u01(rng) < cfg.mutation_rate) g = gene(rng);
            next_fitness.push_back(safe_eval(objective, child, bad_count));
            next.push_back(std::move(child));
        }

        pop = std::move(next);
        fitness = std::move(next_fitness);
        record(gen);

        if (gen >= cfg.stall_generations) {
            const double then = result.history[gen - cfg.stall_generations].best_fitness;
            const double now = result.history[gen].best_fitness;
            if (std::isfinite(then) && now - then <= cfg.function_tolerance) {
                result.stop_reason = "tolerance plateau";
                break;
            }
        }
        if (cfg.time_budget_seconds > 0.0) {
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start_time;
            if (elapsed.count() >= cfg.time_budget_seconds) {
                result.stop_reason = "time budget";
                break;
            }
        }
    }
    if (result.stop_reason.empty()) result.stop_reason = "max generations";
    result.generations = result.history.size() - 1;
    if (bad_count > 0)
        std::cerr << "ga: " << bad_count
                  << " candidate(s) returned non-finite fitness and were penalized\n";
    return result;
}

Eigen::MatrixXd ridge_readout(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                              double c) {
    if (inputs.cols() != targets.cols())
        throw std::invalid_argument("ridge_readout: sample counts differ");
    if (c < 0.0) throw std::invalid_argument("ridge_readout: negative regularization");
    const Eigen::Index m = inputs.rows();
    Eigen::MatrixXd gram = inputs * inputs.transpose();
    gram.diagonal().array() += c;
    Eigen::MatrixXd rhs = inputs * targets.transpose();  // m x n_y
    if (c == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible())
            throw std::runtime_error(
                "ridge_readout: Z Z^T is singular at c = 0; use a positive ridge coefficient");
        return lu.solve(rhs).transpose();
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("ridge_readout: factorization failed");
    Eigen::MatrixXd solved = ldlt.solve(rhs);
    (void)m;
    return solved.transpose();
}

}  // namespace qnesn

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qnesn/dataprep.hpp"
#include "qnesn/quat_targets.hpp"
#include "qnesn/quaternion.hpp"

namespace qnesn {

/// Componentwise mean of the per-window outputs over [k1, k2] (inclusive),
/// min-max scaled over all entries into [0, 1]. A flat matrix (max == min)
/// maps to all zeros.
Eigen::MatrixXd utterance_score(const std::vector<std::vector<Quaternion>>& outputs,
                                std::size_t k1, std::size_t k2);
Eigen::VectorXd utterance_score(const std::vector<Eigen::VectorXd>& outputs, std::size_t k1,
                                std::size_t k2);

/// argmax_n exp(-E_n) with E_n = qmse(D^n, P); equivalently argmin E_n.
/// Ties break to the lowest class index.
std::size_t classify(const Eigen::MatrixXd& score, const QuatTargetSet& targets);
/// Real-mode analogue: argmax over the scaled per-class means.
std::size_t classify(const Eigen::VectorXd& score);

struct ConfusionMatrix {
    Eigen::MatrixXi counts;  // rows = true, cols = predicted

    explicit ConfusionMatrix(std::size_t n_classes = 0)
        : counts(Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n_classes),
                                       static_cast<Eigen::Index>(n_classes))) {}
    void add(std::size_t truth, std::size_t predicted) {
        counts(static_cast<Eigen::Index>(truth), static_cast<Eigen::Index>(predicted)) += 1;
    }
    std::size_t n_classes() const { return static_cast<std::size_t>(counts.rows()); }
    int total() const { return counts.sum(); }
    ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
        counts += other.counts;
        return *this;
    }
};

struct Metrics {
    double war{0.0};
    double uar{0.0};
};

/// Recall_i = TP_i / (TP_i + FN_i); WAR weights recalls by class frequency,
/// UAR averages them over the classes present in the matrix.
Metrics war_uar(const ConfusionMatrix& confusion);

/// Leave-one-speaker-out folds over utterance indices keyed by speaker id.
struct LosoFold {
    std::string test_speaker;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

std::vector<LosoFold> loso_split(const std::vector<FrameMatrix>& data);

}  // namespace qnesn

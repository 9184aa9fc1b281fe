#include "qnesn/evaluate.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace qnesn {

namespace {

void scale_unit_interval(Eigen::MatrixXd& m) {
    const double lo = m.minCoeff();
    const double hi = m.maxCoeff();
    if (hi - lo < 1e-300) {
        m.setZero();
        return;
    }
    m = (m.array() - lo) / (hi - lo);
}

void check_range(std::size_t n, std::size_t k1, std::size_t k2) {
    if (n == 0) throw std::invalid_argument("utterance_score: no outputs");
    if (k1 > k2 || k2 >= n) throw std::invalid_argument("utterance_score: empty or bad range");
}

}  // namespace

Eigen::MatrixXd utterance_score(const std::vector<std::vector<Quaternion>>& outputs,
                                std::size_t k1, std::size_t k2) {
    check_range(outputs.size(), k1, k2);
    const auto n_y = static_cast<Eigen::Index>(outputs[k1].size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_y, 4);
    for (std::size_t t = k1; t <= k2; ++t) {
        if (static_cast<Eigen::Index>(outputs[t].size()) != n_y)
            throw std::invalid_argument("utterance_score: ragged outputs");
        for (Eigen::Index i = 0; i < n_y; ++i) {
            const Quaternion& q = outputs[t][static_cast<std::size_t>(i)];
            p(i, 0) += q.a;
            p(i, 1) += q.b;
            p(i, 2) += q.c;
            p(i, 3) += q.d;
        }
    }
    p /= static_cast<double>(k2 - k1 + 1);
    scale_unit_interval(p);
    return p;
}

Eigen::VectorXd utterance_score(const std::vector<Eigen::VectorXd>& outputs, std::size_t k1,
                                std::size_t k2) {
    check_range(outputs.size(), k1, k2);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(outputs[k1].size());
    for (std::size_t t = k1; t <= k2; ++t) {
        if (outputs[t].size() != mean.size())
            throw std::invalid_argument("utterance_score: ragged outputs");
        mean += outputs[t];
    }
    mean /= static_cast<double>(k2 - k1 + 1);
    Eigen::MatrixXd m = mean;
    scale_unit_interval(m);
    return m.col(0);
}

std::size_t classify(const Eigen::MatrixXd& score, const QuatTargetSet& targets) {
    if (targets.n_classes == 0) throw std::invalid_argument("classify: empty target set");
    std::size_t best = 0;
    double best_e = qmse(targets.targets[0], score);
    for (std::size_t n = 1; n < targets.n_classes; ++n) {
        const double e = qmse(targets.targets[n], score);
        if (e < best_e) {  // argmax exp(-E) == argmin E; strict keeps lowest index on ties
            best_e = e;
            best = n;
        }
    }
    return best;
}

std::size_t classify(const Eigen::VectorXd& score) {
    if (score.size() == 0) throw std::invalid_argument("classify: empty score");
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < score.size(); ++i)
        if (score(i) > score(best)) best = static_cast<std::size_t>(i);
    return best;
}

Metrics war_uar(const ConfusionMatrix& confusion) {
    const auto n = confusion.counts.rows();
    const double total = confusion.counts.sum();
    if (total <= 0.0) throw std::invalid_argument("war_uar: empty confusion matrix");
    Metrics m;
    double recall_sum = 0.0;
    std::size_t present = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row = confusion.counts.row(i).sum();
        if (row == 0.0) continue;  // class absent from this fold
        const double recall = confusion.counts(i, i) / row;
        m.war += (row / total) * recall;
        recall_sum += recall;
        ++present;
    }
    m.uar = recall_sum / static_cast<double>(present);
    return m;
}

std::vector<LosoFold> loso_split(const std::vector<FrameMatrix>& data) {
    std::map<std::string, std::vector<std::size_t>> by_speaker;
    for (std::size_t i = 0; i < data.size(); ++i) by_speaker[data[i].speaker_id].push_back(i);
    if (by_speaker.size() < 2)
        throw std::invalid_argument("loso_split: need at least two speakers, got " +
                                    std::to_string(by_speaker.size()));
    std::vector<LosoFold> folds;
    folds.reserve(by_speaker.size());
    for (const auto& [speaker, test_indices] : by_speaker) {
        LosoFold fold;
        fold.test_speaker = speaker;
        fold.test = test_indices;
        for (const auto& [other, indices] : by_speaker)
            if (other != speaker) fold.train.insert(fold.train.end(), indices.begin(), indices.end());
        folds.push_back(std::move(fold));
    }
    return folds;
}

}  // namespace qnesn

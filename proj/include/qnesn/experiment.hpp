#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnesn/dataprep.hpp"
#include "qnesn/evaluate.hpp"
#include "qnesn/model.hpp"
#include "qnesn/trainer.hpp"

namespace qnesn {

/// Full leave-one-speaker-out experiment: per fold and per RNG seed the
/// model is trained on the other speakers and scored on the held-out one.
struct ExperimentConfig {
    PipelineConfig pipeline;
    GaConfig ga;
    std::size_t window{40};
    std::size_t shift{10};
    bool normalize{true};
    std::vector<std::uint64_t> seeds{1};
    std::size_t threads{1};
    std::string checkpoint_dir;  // empty: no checkpoints written
};

struct RunResult {
    std::size_t fold{0};
    std::string test_speaker;
    std::uint64_t seed{0};
    Metrics test;
    ConfusionMatrix confusion;
    double train_fitness{0.0};
    std::size_t generations{0};
    std::string stop_reason;
    std::size_t n_test{0};
    double seconds_per_utterance{0.0};  // wall clock; kept out of report files
};

struct ExperimentReport {
    Model model{Model::esn};
    std::vector<std::string> labels;
    std::vector<std::string> speakers;
    std::vector<RunResult> runs;  // fold-major, seed-minor
    Metrics mean;                 // over all runs
    ConfusionMatrix confusion;    // summed over runs
    std::vector<std::string> warnings;
    double total_seconds{0.0};
};

ExperimentReport run_experiment(const std::vector<FrameMatrix>& data,
                                const ExperimentConfig& cfg);

/// Deterministic report renderings: fixed precision, no timestamps.
std::string format_report(const ExperimentReport& report);
std::string format_report_kv(const ExperimentReport& report);
/// Wall-clock figures; excluded from the deterministic report pair.
std::string format_timing_kv(const ExperimentReport& report);

}  // namespace qnesn

#pragma once

#include <string>
#include <vector>

#include "qnesn/config.hpp"
#include "qnesn/experiment.hpp"

namespace qnesn {

enum class SweepAxis { filter_order, reservoir_size, window };

SweepAxis parse_axis(const std::string& s);
std::string to_string(SweepAxis axis);

/// One table line: structural columns are always present, recognition rates
/// only when the run was executed (dry sweeps report the structure alone).
struct SweepRow {
    std::size_t axis_value{0};
    Model model{Model::esn};
    Dims dims;
    std::size_t theta_len{0};  // 0 for the ridge esn (no genome)
    bool executed{false};
    Metrics mean;
    double seconds_per_utterance{0.0};
};

/// Fills the structural columns (dims, genome length) without training.
SweepRow structural_row(Model model, const Dims& dims, std::size_t axis_value);

/// Applies the axis value to a copy of the base config and runs the full
/// experiment per value unless dry_run is set.
std::vector<SweepRow> run_sweep(const std::vector<FrameMatrix>& data, const RunConfig& base,
                                SweepAxis axis, const std::vector<std::size_t>& values,
                                bool dry_run);

std::string format_sweep_table(SweepAxis axis, const std::vector<SweepRow>& rows);
std::string format_sweep_kv(SweepAxis axis, const std::vector<SweepRow>& rows);

}  // namespace qnesn

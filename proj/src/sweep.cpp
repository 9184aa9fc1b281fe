#include "qnesn/sweep.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qnesn {

SweepAxis parse_axis(const std::string& s) {
    if (s == "filter_order") return SweepAxis::filter_order;
    if (s == "reservoir_size") return SweepAxis::reservoir_size;
    if (s == "window") return SweepAxis::window;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::filter_order: return "filter_order";
        case SweepAxis::reservoir_size: return "reservoir_size";
        case SweepAxis::window: return "window";
    }
    return "?";
}

SweepRow structural_row(Model model, const Dims& dims, std::size_t axis_value) {
    SweepRow row;
    row.axis_value = axis_value;
    row.model = model;
    row.dims = dims;
    row.theta_len = is_ga_trained(model) ? theta_length(model, dims) : 0;
    return row;
}

std::vector<SweepRow> run_sweep(const std::vector<FrameMatrix>& data, const RunConfig& base,
                                SweepAxis axis, const std::vector<std::size_t>& values,
                                bool dry_run) {
    if (values.empty()) throw std::invalid_argument("sweep: values list is empty");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t value : values) {
        RunConfig cfg = base;
        switch (axis) {
            case SweepAxis::filter_order:
                cfg.experiment.pipeline.filter_order = value;
                break;
            case SweepAxis::reservoir_size:
                cfg.experiment.pipeline.reservoir.n_units = value;
                break;
            case SweepAxis::window:
                cfg.experiment.window = value;
                break;
        }
        cfg.experiment.checkpoint_dir.clear();

        const Model model = cfg.experiment.pipeline.model;
        const bool quat = is_quaternion(model);
        const std::size_t n_features = data.front().n_features();
        Dims dims;
        dims.n_units = cfg.experiment.pipeline.reservoir.n_units;
        dims.n_inputs = quat ? n_features : 4 * n_features;
        dims.n_outputs = collect_labels(data).size();
        dims.n_reduce = cfg.experiment.pipeline.n_reduce;
        dims.filter_order = cfg.experiment.pipeline.filter_order;
        dims.structure = cfg.experiment.pipeline.structure;
        SweepRow row = structural_row(model, dims, value);

        if (!dry_run) {
            ExperimentReport report = run_experiment(data, cfg.experiment);
            row.executed = true;
            row.mean = report.mean;
            double secs = 0.0;
            for (const auto& run : report.runs) secs += run.seconds_per_utterance;
            row.seconds_per_utterance = secs / static_cast<double>(report.runs.size());
        }
        rows.push_back(row);
    }
    return rows;
}

std::string format_sweep_table(SweepAxis axis, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "axis: " << to_string(axis) << "\n";
    os << "value  model   N_Ru  W size     M(=x+u+1)  reduce  len(theta)  WAR       UAR       s/utt\n";
    for (const auto& row : rows) {
        char w_size[24];
        std::snprintf(w_size, sizeof(w_size), "%zux%zu", row.dims.n_units, row.dims.n_units);
        char line[192];
        if (row.executed)
            std::snprintf(line, sizeof(line),
                          "%-6zu %-7s %-5zu %-10s %-10zu %-7zu %-11zu %-9.6f %-9.6f %.4f\n",
                          row.axis_value, to_string(row.model).c_str(), row.dims.n_units, w_size,
                          row.dims.full_readout_width(), row.dims.n_reduce, row.theta_len,
                          row.mean.war, row.mean.uar, row.seconds_per_utterance);
        else
            std::snprintf(line, sizeof(line),
                          "%-6zu %-7s %-5zu %-10s %-10zu %-7zu %-11zu %-9s %-9s %s\n",
                          row.axis_value, to_string(row.model).c_str(), row.dims.n_units, w_size,
                          row.dims.full_readout_width(), row.dims.n_reduce, row.theta_len, "--",
                          "--", "--");
        os << line;
    }
    return os.str();
}

std::string format_sweep_kv(SweepAxis axis, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "axis=" << to_string(axis) << "\n";
    for (const auto& row : rows) {
        const std::string prefix = "row." + std::to_string(row.axis_value);
        os << prefix << ".theta_len=" << row.theta_len << "\n";
        if (row.executed) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", row.mean.war);
            os << prefix << ".war=" << buf << "\n";
            std::snprintf(buf, sizeof(buf), "%.6f", row.mean.uar);
            os << prefix << ".uar=" << buf << "\n";
        }
    }
    return os.str();
}

}  // namespace qnesn

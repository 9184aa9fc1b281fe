// Command-line driver: dataset synthesis, LOSO training, checkpoint
// evaluation, parameter sweeps and report re-emission.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qnesn/config.hpp"
#include "qnesn/dataprep.hpp"
#include "qnesn/experiment.hpp"
#include "qnesn/model.hpp"
#include "qnesn/serialize.hpp"
#include "qnesn/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "qnesn 0.1.0";

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t env_threads() {
    const char* raw = std::getenv("QNESN_THREADS");
    if (!raw) return 0;
    const long n = std::strtol(raw, nullptr, 10);
    return n > 0 ? static_cast<std::size_t>(n) : 0;
}

qnesn::RunConfig resolve_config(const std::string& config_path,
                                const qnesn::ConfigOverrides& overrides) {
    qnesn::RunConfig cfg = config_path.empty() ? qnesn::default_config(overrides)
                                               : qnesn::load_config(config_path, overrides);
    if (const std::size_t n = env_threads(); n > 0) cfg.experiment.threads = n;
    return cfg;
}

void write_manifest(const qnesn::RunConfig& cfg, const std::string& command) {
    json manifest;
    manifest["command"] = command;
    manifest["code_version"] = kVersion;
    manifest["config"] = json::parse(cfg.canonical);
    manifest["config_hash"] = cfg.hash();
    write_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

int cmd_synth(const qnesn::SynthSpec& spec, const std::string& out_path) {
    auto frames = qnesn::synth_dataset(spec);
    qnesn::save_frames(out_path, frames);
    std::cout << "wrote " << frames.size() << " utterances to " << out_path << "\n";
    return 0;
}

int cmd_train(qnesn::RunConfig cfg) {
    if (cfg.train_data.empty())
        throw std::invalid_argument("train: no dataset (set data.train or --data)");
    auto data = qnesn::load_frames(cfg.train_data);
    fs::create_directories(cfg.out_dir);
    cfg.experiment.checkpoint_dir = cfg.out_dir + "/checkpoints";

    qnesn::ExperimentReport report = qnesn::run_experiment(data, cfg.experiment);

    const std::string text = qnesn::format_report(report);
    write_file(cfg.out_dir + "/report.txt", text);
    write_file(cfg.out_dir + "/report.kv", qnesn::format_report_kv(report));
    write_file(cfg.out_dir + "/timing.kv", qnesn::format_timing_kv(report));
    write_manifest(cfg, "train");
    std::cout << text;
    return 0;
}

int cmd_eval(const std::string& checkpoint_dir, const std::string& data_path,
             const std::string& out_dir) {
    qnesn::Checkpoint c = qnesn::load_checkpoint(checkpoint_dir);
    auto data = qnesn::load_frames(data_path, c.labels);

    const std::size_t native = c.dims.n_inputs;
    const std::size_t n_features = qnesn::is_quaternion(c.model) ? native : native / 4;
    if (data.front().n_features() != n_features)
        throw std::invalid_argument("eval: dataset has " +
                                    std::to_string(data.front().n_features()) +
                                    " features, checkpoint expects " + std::to_string(n_features));

    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    qnesn::UtteranceSet set = qnesn::build_utterance_set(
        data, all, c.normalize ? &c.norm : nullptr, c.window, c.shift, c.labels,
        qnesn::collect_speakers(data));

    qnesn::PipelineConfig pc;
    pc.model = c.model;
    pc.reservoir = c.reservoir;
    pc.n_reduce = c.dims.n_reduce;
    pc.filter_order = c.dims.filter_order;
    pc.structure = c.dims.structure;
    qnesn::ModelPipeline pipeline(pc, n_features, c.labels.size());

    qnesn::BuiltModel built;
    if (c.model == qnesn::Model::esn) {
        built.model = c.model;
        built.weights_real = qnesn::init_weights_real(c.reservoir);
        built.linear_real.w_out = qnesn::Mat<double>(c.dims.n_outputs, c.dims.readout_width());
        if (c.theta.size() != built.linear_real.w_out.data().size())
            throw std::runtime_error("eval: checkpoint W_out size mismatch");
        std::copy(c.theta.begin(), c.theta.end(), built.linear_real.w_out.data().begin());
    } else {
        built = pipeline.materialize(c.theta);
    }
    if (c.has_basis) built.basis = c.basis;

    qnesn::ConfusionMatrix confusion(c.labels.size());
    qnesn::Metrics m = pipeline.evaluate(built, pipeline.prepare(set), &confusion);

    char line[128];
    std::snprintf(line, sizeof(line), "WAR %.6f  UAR %.6f  (%zu utterances)\n", m.war, m.uar,
                  set.utterances.size());
    std::cout << line;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        char kv[160];
        std::snprintf(kv, sizeof(kv), "war=%.6f\nuar=%.6f\nn_utterances=%zu\n", m.war, m.uar,
                      set.utterances.size());
        write_file(out_dir + "/eval.kv", kv);
    }
    return 0;
}

int cmd_sweep(const qnesn::RunConfig& cfg, const std::string& axis_name,
              const std::vector<std::size_t>& values, bool dry_run) {
    qnesn::SweepAxis axis = qnesn::parse_axis(axis_name);
    if (cfg.train_data.empty())
        throw std::invalid_argument("sweep: no dataset (set data.train or --data)");
    auto data = qnesn::load_frames(cfg.train_data);
    auto rows = qnesn::run_sweep(data, cfg, axis, values, dry_run);
    const std::string table = qnesn::format_sweep_table(axis, rows);
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir + "/sweep.txt", table);
    write_file(cfg.out_dir + "/sweep.kv", qnesn::format_sweep_kv(axis, rows));
    write_manifest(cfg, "sweep");
    std::cout << table;
    return 0;
}

int cmd_report(const std::string& run_dir) {
    std::cout << read_file(run_dir + "/report.txt");
    const std::string timing = run_dir + "/timing.kv";
    if (fs::exists(timing)) std::cout << "\n" << read_file(timing);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reservoir-computing toolkit: echo state networks with quaternion "
                 "algebra, bilinear readouts and GA training"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, data_path, model_name, axis_name, checkpoint_dir, run_dir;
    std::uint64_t seed = 0;
    bool has_seed = false, paper_scale = false, dry_run = false;
    std::vector<std::size_t> values;
    qnesn::SynthSpec synth_spec;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--model", model_name, "esn|esn-ga|nesn|qesn|qnesn");
        cmd->add_option("--seed", seed, "single RNG seed")->each([&](const std::string&) {
            has_seed = true;
        });
        cmd->add_option("--out", out_path, "output directory");
        cmd->add_option("--data", data_path, "frame feature CSV");
        cmd->add_flag("--paper-scale", paper_scale, "restore full-scale GA settings");
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic frame-feature dataset");
    synth->add_option("--config", config_path, "JSON config file (synth section)");
    synth->add_option("--out", out_path, "output CSV path")->required();
    auto* opt_classes = synth->add_option("--classes", synth_spec.n_classes, "number of classes");
    auto* opt_speakers =
        synth->add_option("--speakers", synth_spec.n_speakers, "number of speakers");
    auto* opt_utts = synth->add_option("--utterances-per", synth_spec.utterances_per,
                                       "utterances per speaker per class");
    auto* opt_frames = synth->add_option("--frames", synth_spec.frames, "frames per utterance");
    auto* opt_features = synth->add_option("--features", synth_spec.n_features, "frame features");
    synth->add_option("--seed", seed, "generator seed")->each([&](const std::string&) {
        has_seed = true;
    });

    CLI::App* train = app.add_subcommand("train", "LOSO train + evaluate, write report");
    add_common(train);

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    eval_cmd->add_option("--checkpoint", checkpoint_dir, "checkpoint directory")->required();
    eval_cmd->add_option("--data", data_path, "frame feature CSV")->required();
    eval_cmd->add_option("--out", out_path, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "one training run per axis value");
    add_common(sweep);
    sweep->add_option("--axis", axis_name, "filter_order|reservoir_size|window")->required();
    sweep->add_option("--values", values, "axis values")->required();
    sweep->add_flag("--dry-run", dry_run, "structural table only, no training");

    CLI::App* report = app.add_subcommand("report", "re-emit tables from a run directory");
    report->add_option("--in", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        qnesn::ConfigOverrides overrides;
        if (!model_name.empty()) overrides.model = model_name;
        if (has_seed) overrides.seed = seed;
        if (!out_path.empty()) overrides.out = out_path;
        if (!data_path.empty()) overrides.data = data_path;
        overrides.paper_scale = paper_scale;

        if (synth->parsed()) {
            qnesn::SynthSpec spec = synth_spec;
            if (!config_path.empty()) {
                // Config supplies the base; explicitly passed flags win.
                qnesn::SynthSpec from_cfg =
                    resolve_config(config_path, qnesn::ConfigOverrides{}).synth;
                spec = from_cfg;
                if (*opt_classes) spec.n_classes = synth_spec.n_classes;
                if (*opt_speakers) spec.n_speakers = synth_spec.n_speakers;
                if (*opt_utts) spec.utterances_per = synth_spec.utterances_per;
                if (*opt_frames) spec.frames = synth_spec.frames;
                if (*opt_features) spec.n_features = synth_spec.n_features;
            }
            if (has_seed) spec.seed = seed;
            spec.validate();
            return cmd_synth(spec, out_path);
        }
        if (train->parsed()) return cmd_train(resolve_config(config_path, overrides));
        if (eval_cmd->parsed()) return cmd_eval(checkpoint_dir, data_path, out_path);
        if (sweep->parsed())
            return cmd_sweep(resolve_config(config_path, overrides), axis_name, values, dry_run);
        if (report->parsed()) return cmd_report(run_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

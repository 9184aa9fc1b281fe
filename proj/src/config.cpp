#include "qnesn/config.hpp"

#include <fstream>

#include <json.hpp>

#include "qnesn/serialize.hpp"

namespace qnesn {

using nlohmann::json;

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_into(const json& j, RunConfig& config) {
    if (j.contains("model"))
        config.experiment.pipeline.model = parse_model(j.at("model").get<std::string>());
    read_if(j, "out", config.out_dir);
    read_if(j, "threads", config.experiment.threads);

    if (j.contains("data")) {
        const json& d = j.at("data");
        read_if(d, "train", config.train_data);
        read_if(d, "window", config.experiment.window);
        read_if(d, "shift", config.experiment.shift);
        read_if(d, "normalize", config.experiment.normalize);
    }
    if (j.contains("synth")) {
        const json& s = j.at("synth");
        read_if(s, "classes", config.synth.n_classes);
        read_if(s, "speakers", config.synth.n_speakers);
        read_if(s, "utterances_per", config.synth.utterances_per);
        read_if(s, "frames", config.synth.frames);
        read_if(s, "features", config.synth.n_features);
        read_if(s, "seed", config.synth.seed);
    }
    if (j.contains("reservoir")) {
        const json& r = j.at("reservoir");
        ReservoirParams& p = config.experiment.pipeline.reservoir;
        read_if(r, "units", p.n_units);
        read_if(r, "input_scaling", p.input_scaling);
        read_if(r, "spectral_radius", p.spectral_radius);
        read_if(r, "leaking_rate", p.leaking_rate);
        read_if(r, "ridge_c", p.ridge_c);
        read_if(r, "density", p.density);
    }
    if (j.contains("readout")) {
        const json& r = j.at("readout");
        read_if(r, "filter_order", config.experiment.pipeline.filter_order);
        read_if(r, "reduce", config.experiment.pipeline.n_reduce);
        read_if(r, "center_at_transform", config.experiment.pipeline.center_at_transform);
        if (r.contains("structure"))
            config.experiment.pipeline.structure =
                parse_structure(r.at("structure").get<std::string>());
    }
    if (j.contains("ga")) {
        const json& g = j.at("ga");
        GaConfig& ga = config.experiment.ga;
        read_if(g, "population", ga.population_size);
        read_if(g, "elite_fraction", ga.elite_fraction);
        read_if(g, "crossover_fraction", ga.crossover_fraction);
        read_if(g, "mutation_rate", ga.mutation_rate);
        read_if(g, "max_generations", ga.max_generations);
        read_if(g, "stall_generations", ga.stall_generations);
        read_if(g, "function_tolerance", ga.function_tolerance);
        read_if(g, "time_budget_seconds", ga.time_budget_seconds);
    }
    if (j.contains("eval")) {
        const json& e = j.at("eval");
        if (e.contains("seeds"))
            config.experiment.seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
    }
}

json canonical_json(const RunConfig& c) {
    json j;
    j["model"] = to_string(c.experiment.pipeline.model);
    j["out"] = c.out_dir;
    j["threads"] = c.experiment.threads;
    j["data"] = {{"train", c.train_data},
                 {"window", c.experiment.window},
                 {"shift", c.experiment.shift},
                 {"normalize", c.experiment.normalize}};
    j["synth"] = {{"classes", c.synth.n_classes},       {"speakers", c.synth.n_speakers},
                  {"utterances_per", c.synth.utterances_per}, {"frames", c.synth.frames},
                  {"features", c.synth.n_features},     {"seed", c.synth.seed}};
    const ReservoirParams& p = c.experiment.pipeline.reservoir;
    j["reservoir"] = {{"units", p.n_units},
                      {"input_scaling", p.input_scaling},
                      {"spectral_radius", p.spectral_radius},
                      {"leaking_rate", p.leaking_rate},
                      {"ridge_c", p.ridge_c},
                      {"density", p.density}};
    j["readout"] = {{"filter_order", c.experiment.pipeline.filter_order},
                    {"reduce", c.experiment.pipeline.n_reduce},
                    {"structure", to_string(c.experiment.pipeline.structure)},
                    {"center_at_transform", c.experiment.pipeline.center_at_transform}};
    const GaConfig& g = c.experiment.ga;
    j["ga"] = {{"population", g.population_size},
               {"elite_fraction", g.elite_fraction},
               {"crossover_fraction", g.crossover_fraction},
               {"mutation_rate", g.mutation_rate},
               {"max_generations", g.max_generations},
               {"stall_generations", g.stall_generations},
               {"function_tolerance", g.function_tolerance},
               {"time_budget_seconds", g.time_budget_seconds}};
    j["eval"] = {{"seeds", c.experiment.seeds}};
    j["paper_scale"] = c.paper_scale;
    return j;
}

void finalize(RunConfig& config, const ConfigOverrides& overrides) {
    if (overrides.model)
        config.experiment.pipeline.model = parse_model(*overrides.model);
    if (overrides.out) config.out_dir = *overrides.out;
    if (overrides.data) config.train_data = *overrides.data;
    if (overrides.seed) config.experiment.seeds = {*overrides.seed};
    if (overrides.paper_scale) config.paper_scale = true;
    if (config.paper_scale) apply_paper_scale(config);

    // Fail before any compute: surface bad numbers with the key that owns them.
    config.synth.validate();
    if (config.experiment.window == 0 || config.experiment.shift == 0)
        throw std::invalid_argument("config: data.window and data.shift must be >= 1");
    if (config.experiment.seeds.empty())
        throw std::invalid_argument("config: eval.seeds must not be empty");
    config.experiment.ga.validate();
    ReservoirParams probe = config.experiment.pipeline.reservoir;
    probe.n_inputs = 1;  // data-dependent; validated for real later
    probe.validate();

    config.canonical = canonical_json(config).dump();
}

}  // namespace

std::string RunConfig::hash() const { return fnv1a_hex(canonical); }

void apply_paper_scale(RunConfig& config) {
    GaConfig& ga = config.experiment.ga;
    ga.population_size = 500;
    ga.max_generations = 0;  // 100 * n_vars
    ga.stall_generations = 50;
    ga.function_tolerance = 1e-6;
    config.experiment.seeds.clear();
    for (std::uint64_t s = 0; s < 10; ++s) config.experiment.seeds.push_back(s);
}

RunConfig default_config(const ConfigOverrides& overrides) {
    RunConfig config;
    // Desk-scale GA defaults; --paper-scale restores the full settings.
    config.experiment.ga.population_size = 50;
    config.experiment.ga.max_generations = 200;
    config.experiment.ga.stall_generations = 20;
    config.experiment.pipeline.reservoir.n_units = 8;
    config.experiment.pipeline.n_reduce = 12;
    config.experiment.pipeline.filter_order = 3;
    finalize(config, overrides);
    return config;
}

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    RunConfig config = default_config(ConfigOverrides{});
    try {
        parse_into(j, config);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    finalize(config, overrides);
    return config;
}

}  // namespace qnesn

#pragma once

#include <optional>
#include <string>

#include "qnesn/dataprep.hpp"
#include "qnesn/experiment.hpp"

namespace qnesn {

/// One JSON config file with nested sections drives every CLI run; command
/// line flags override single keys. Missing sections fall back to the
/// desk-scale defaults baked into the member initializers.
struct RunConfig {
    ExperimentConfig experiment;
    SynthSpec synth;
    std::string train_data;
    std::string out_dir{"run"};
    bool paper_scale{false};
    std::string canonical;  // canonical JSON dump used for the config hash

    std::string hash() const;
};

struct ConfigOverrides {
    std::optional<std::string> model;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> data;
    bool paper_scale{false};
};

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides);
RunConfig default_config(const ConfigOverrides& overrides);

/// Table 6 settings: population 500, 100 * n_vars generations, ten RNG seeds.
void apply_paper_scale(RunConfig& config);

}  // namespace qnesn

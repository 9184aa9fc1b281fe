#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "qnesn/config.hpp"
#include "qnesn/serialize.hpp"

using namespace qnesn;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qnesn_ser_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("theta binary + header round trip") {
    TempDir tmp;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Dims dims;
    dims.n_units = 3;
    dims.n_inputs = 2;
    dims.n_outputs = 2;
    dims.n_reduce = 4;
    dims.filter_order = 3;
    ThetaVector theta(theta_length(Model::qnesn, dims));
    for (auto& g : theta) g = u(rng);

    save_theta(tmp.file("t.bin"), tmp.file("t.json"), theta, Model::qnesn, dims);
    Model model;
    Dims loaded_dims;
    ThetaVector loaded = load_theta(tmp.file("t.bin"), tmp.file("t.json"), &model, &loaded_dims);
    CHECK(loaded == theta);  // bit-exact
    CHECK(model == Model::qnesn);
    CHECK(loaded_dims.n_units == dims.n_units);
    CHECK(loaded_dims.n_reduce == dims.n_reduce);
    CHECK(loaded_dims.filter_order == dims.filter_order);
}

TEST_CASE("checkpoint round trip") {
    TempDir tmp;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    Checkpoint c;
    c.model = Model::qnesn;
    c.dims.n_units = 4;
    c.dims.n_inputs = 3;
    c.dims.n_outputs = 2;
    c.dims.n_reduce = 5;
    c.dims.filter_order = 3;
    c.reservoir.n_units = 4;
    c.reservoir.n_inputs = 3;
    c.reservoir.input_scaling = 0.5;
    c.reservoir.spectral_radius = 0.1;
    c.reservoir.leaking_rate = 0.9;
    c.reservoir.seed = 9;
    c.window = 40;
    c.shift = 10;
    c.normalize = true;
    c.labels = {"a", "b"};
    c.speakers = {"s0", "s1", "s2"};
    c.norm.mean = Eigen::VectorXd::Random(3);
    c.norm.std = Eigen::VectorXd::Random(3).cwiseAbs();
    c.theta.resize(theta_length(Model::qnesn, c.dims));
    for (auto& g : c.theta) g = u(rng);
    c.has_basis = true;
    c.basis.dim = 5;
    c.basis.eigvects = Eigen::MatrixXd::Random(8, 5);
    c.basis.eigvals = Eigen::VectorXd::Random(5).cwiseAbs();
    c.basis.mean = Eigen::MatrixXd::Random(4, 8);
    c.basis.total_variance = 3.25;
    c.train_fitness = 0.75;
    c.generations = 17;
    c.stop_reason = "tolerance plateau";
    c.config_hash = "deadbeef";
    c.seed = 4;

    save_checkpoint(tmp.file("ck"), c);
    Checkpoint l = load_checkpoint(tmp.file("ck"));
    CHECK(l.model == c.model);
    CHECK(l.theta == c.theta);
    CHECK(l.labels == c.labels);
    CHECK(l.speakers == c.speakers);
    CHECK((l.norm.mean - c.norm.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((l.basis.eigvects - c.basis.eigvects).cwiseAbs().maxCoeff() == 0.0);
    CHECK((l.basis.mean - c.basis.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK(l.basis.dim == 5);
    CHECK(l.train_fitness == c.train_fitness);
    CHECK(l.generations == 17);
    CHECK(l.reservoir.seed == 9);
    CHECK(l.config_hash == "deadbeef");
}

TEST_CASE("config loading, overrides and validation") {
    TempDir tmp;
    SUBCASE("defaults are desk scale") {
        auto cfg = default_config({});
        CHECK(cfg.experiment.ga.population_size == 50);
        CHECK(cfg.experiment.pipeline.reservoir.n_units == 8);
        CHECK(cfg.experiment.seeds == std::vector<std::uint64_t>{1});
    }
    SUBCASE("paper scale restores the full GA settings") {
        ConfigOverrides o;
        o.paper_scale = true;
        auto cfg = default_config(o);
        CHECK(cfg.experiment.ga.population_size == 500);
        CHECK(cfg.experiment.ga.max_generations == 0);  // 100 * n_vars
        CHECK(cfg.experiment.seeds.size() == 10);
    }
    SUBCASE("file values and flag overrides") {
        const auto path = tmp.file("cfg.json");
        std::ofstream(path) << R"({
            "model": "nesn",
            "data": {"train": "frames.csv", "window": 30, "shift": 5},
            "reservoir": {"units": 12, "spectral_radius": 0.3},
            "ga": {"population": 24},
            "eval": {"seeds": [3, 4]}
        })";
        ConfigOverrides o;
        o.model = "qnesn";
        o.seed = 9;
        auto cfg = load_config(path, o);
        CHECK(cfg.experiment.pipeline.model == Model::qnesn);  // flag wins
        CHECK(cfg.experiment.window == 30);
        CHECK(cfg.experiment.pipeline.reservoir.n_units == 12);
        CHECK(cfg.experiment.pipeline.reservoir.spectral_radius == 0.3);
        CHECK(cfg.experiment.ga.population_size == 24);
        CHECK(cfg.experiment.seeds == std::vector<std::uint64_t>{9});  // flag wins
        CHECK(cfg.train_data == "frames.csv");
        CHECK_FALSE(cfg.hash().empty());
    }
    SUBCASE("invalid values rejected before compute") {
        const auto path = tmp.file("bad.json");
        std::ofstream(path) << R"({"reservoir": {"spectral_radius": 1.5}})";
        CHECK_THROWS_AS(load_config(path, {}), std::invalid_argument);
        const auto path2 = tmp.file("bad2.json");
        std::ofstream(path2) << R"({"data": {"window": 0}})";
        CHECK_THROWS_AS(load_config(path2, {}), std::invalid_argument);
        const auto path3 = tmp.file("notjson.json");
        std::ofstream(path3) << "not json {";
        CHECK_THROWS_AS(load_config(path3, {}), std::invalid_argument);
        CHECK_THROWS_AS(load_config(tmp.file("missing.json"), {}), std::invalid_argument);
    }
    SUBCASE("hash is stable and canonical") {
        auto a = default_config({});
        auto b = default_config({});
        CHECK(a.hash() == b.hash());
        ConfigOverrides o;
        o.model = "qesn";
        CHECK(default_config(o).hash() != a.hash());
    }
}

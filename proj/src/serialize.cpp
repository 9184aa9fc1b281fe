#include "qnesn/serialize.hpp"

#include <bit>
#include <filesystem>
#include <fstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "raw double files assume a little-endian host");

namespace qnesn {

using nlohmann::json;

void write_doubles(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_doubles(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot read " + path);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(double) != 0)
        throw std::runtime_error(path + ": size is not a multiple of 8 bytes");
    std::vector<double> values(bytes / sizeof(double));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw std::runtime_error("read failed: " + path);
    return values;
}

namespace {

json dims_to_json(const Dims& d) {
    return json{{"n_units", d.n_units},
                {"n_inputs", d.n_inputs},
                {"n_outputs", d.n_outputs},
                {"n_reduce", d.n_reduce},
                {"filter_order", d.filter_order},
                {"structure", to_string(d.structure)}};
}

Dims dims_from_json(const json& j) {
    Dims d;
    d.n_units = j.at("n_units").get<std::size_t>();
    d.n_inputs = j.at("n_inputs").get<std::size_t>();
    d.n_outputs = j.at("n_outputs").get<std::size_t>();
    d.n_reduce = j.at("n_reduce").get<std::size_t>();
    d.filter_order = j.at("filter_order").get<std::size_t>();
    d.structure = parse_structure(j.at("structure").get<std::string>());
    return d;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i];
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    const auto r = rows.size();
    const auto c = r > 0 ? rows[0].size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

}  // namespace

void save_theta(const std::string& bin_path, const std::string& header_path,
                const ThetaVector& theta, Model model, const Dims& dims) {
    write_doubles(bin_path, theta);
    json header{{"model", to_string(model)},
                {"dims", dims_to_json(dims)},
                {"length", theta.size()},
                {"layout", is_bilinear(model) ? "A,B,C,W_in,W" : "W_in,W,W_out"}};
    std::ofstream out(header_path);
    if (!out) throw std::runtime_error("cannot write " + header_path);
    out << header.dump(2) << '\n';
}

ThetaVector load_theta(const std::string& bin_path, const std::string& header_path, Model* model,
                       Dims* dims) {
    std::ifstream in(header_path);
    if (!in) throw std::runtime_error("cannot read " + header_path);
    json header = json::parse(in);
    ThetaVector theta = read_doubles(bin_path);
    if (header.contains("length") && header.at("length").get<std::size_t>() != theta.size())
        throw std::runtime_error(bin_path + ": length does not match header");
    if (model) *model = parse_model(header.at("model").get<std::string>());
    if (dims) *dims = dims_from_json(header.at("dims"));
    return theta;
}

void save_checkpoint(const std::string& dir, const Checkpoint& checkpoint) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    save_theta(dir + "/theta.bin", dir + "/theta.json", checkpoint.theta, checkpoint.model,
               checkpoint.dims);

    json j;
    j["model"] = to_string(checkpoint.model);
    j["dims"] = dims_to_json(checkpoint.dims);
    j["reservoir"] = {{"input_scaling", checkpoint.reservoir.input_scaling},
                      {"spectral_radius", checkpoint.reservoir.spectral_radius},
                      {"leaking_rate", checkpoint.reservoir.leaking_rate},
                      {"ridge_c", checkpoint.reservoir.ridge_c},
                      {"density", checkpoint.reservoir.density},
                      {"seed", checkpoint.reservoir.seed}};
    j["window"] = checkpoint.window;
    j["shift"] = checkpoint.shift;
    j["normalize"] = checkpoint.normalize;
    j["labels"] = checkpoint.labels;
    j["speakers"] = checkpoint.speakers;
    if (checkpoint.normalize) {
        j["norm_mean"] = vector_to_json(checkpoint.norm.mean);
        j["norm_std"] = vector_to_json(checkpoint.norm.std);
    }
    j["train_fitness"] = checkpoint.train_fitness;
    j["generations"] = checkpoint.generations;
    j["stop_reason"] = checkpoint.stop_reason;
    j["config_hash"] = checkpoint.config_hash;
    j["seed"] = checkpoint.seed;
    j["has_basis"] = checkpoint.has_basis;
    if (checkpoint.has_basis) {
        const auto& b = checkpoint.basis;
        std::vector<double> flat(static_cast<std::size_t>(b.eigvects.size()));
        Eigen::Map<Eigen::MatrixXd>(flat.data(), b.eigvects.rows(), b.eigvects.cols()) =
            b.eigvects;
        write_doubles(dir + "/basis.bin", flat);
        j["basis"] = {{"rows", b.eigvects.rows()},
                      {"dim", b.dim},
                      {"eigvals", vector_to_json(b.eigvals)},
                      {"mean", matrix_to_json(b.mean)},
                      {"total_variance", b.total_variance},
                      {"center_at_transform", b.center_at_transform}};
    }
    std::ofstream out(dir + "/checkpoint.json");
    if (!out) throw std::runtime_error("cannot write " + dir + "/checkpoint.json");
    out << j.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::string& dir) {
    std::ifstream in(dir + "/checkpoint.json");
    if (!in) throw std::runtime_error("cannot read " + dir + "/checkpoint.json");
    json j = json::parse(in);

    Checkpoint c;
    c.model = parse_model(j.at("model").get<std::string>());
    c.dims = dims_from_json(j.at("dims"));
    c.reservoir.n_units = c.dims.n_units;
    c.reservoir.n_inputs = c.dims.n_inputs;
    c.reservoir.input_scaling = j.at("reservoir").at("input_scaling").get<double>();
    c.reservoir.spectral_radius = j.at("reservoir").at("spectral_radius").get<double>();
    c.reservoir.leaking_rate = j.at("reservoir").at("leaking_rate").get<double>();
    c.reservoir.ridge_c = j.at("reservoir").at("ridge_c").get<double>();
    c.reservoir.density = j.at("reservoir").at("density").get<double>();
    c.reservoir.seed = j.at("reservoir").at("seed").get<std::uint64_t>();
    c.reservoir.mode = is_quaternion(c.model) ? ReservoirMode::quaternion : ReservoirMode::real;
    c.window = j.at("window").get<std::size_t>();
    c.shift = j.at("shift").get<std::size_t>();
    c.normalize = j.at("normalize").get<bool>();
    c.labels = j.at("labels").get<std::vector<std::string>>();
    c.speakers = j.at("speakers").get<std::vector<std::string>>();
    if (c.normalize) {
        c.norm.mean = vector_from_json(j.at("norm_mean"));
        c.norm.std = vector_from_json(j.at("norm_std"));
    }
    c.train_fitness = j.at("train_fitness").get<double>();
    c.generations = j.at("generations").get<std::size_t>();
    c.stop_reason = j.at("stop_reason").get<std::string>();
    c.config_hash = j.at("config_hash").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.theta = load_theta(dir + "/theta.bin", dir + "/theta.json");
    c.has_basis = j.at("has_basis").get<bool>();
    if (c.has_basis) {
        const json& bj = j.at("basis");
        auto flat = read_doubles(dir + "/basis.bin");
        const auto rows = bj.at("rows").get<Eigen::Index>();
        c.basis.dim = bj.at("dim").get<std::size_t>();
        c.basis.eigvects =
            Eigen::Map<Eigen::MatrixXd>(flat.data(), rows, static_cast<Eigen::Index>(c.basis.dim));
        c.basis.eigvals = vector_from_json(bj.at("eigvals"));
        c.basis.mean = matrix_from_json(bj.at("mean"));
        c.basis.total_variance = bj.at("total_variance").get<double>();
        c.basis.center_at_transform = bj.at("center_at_transform").get<bool>();
    }
    return c;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace qnesn

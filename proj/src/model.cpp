#include "qnesn/model.hpp"

#include <stdexcept>

namespace qnesn {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ModelPipeline::ModelPipeline(const PipelineConfig& cfg, std::size_t n_features,
                             std::size_t n_classes)
    : cfg_(cfg) {
    if (n_features == 0) throw std::invalid_argument("pipeline: no features");
    if (n_classes == 0) throw std::invalid_argument("pipeline: no classes");
    const bool quat = is_quaternion(cfg_.model);
    cfg_.reservoir.mode = quat ? ReservoirMode::quaternion : ReservoirMode::real;
    cfg_.reservoir.n_inputs = quat ? n_features : 4 * n_features;
    cfg_.reservoir.validate();

    dims_.n_units = cfg_.reservoir.n_units;
    dims_.n_inputs = cfg_.reservoir.n_inputs;
    dims_.n_outputs = n_classes;
    dims_.n_reduce = cfg_.n_reduce;
    dims_.filter_order = cfg_.filter_order;
    dims_.structure = cfg_.structure;
    if (is_bilinear(cfg_.model) && cfg_.filter_order < 2)
        throw std::invalid_argument("pipeline: bilinear filter order must be >= 2");
    if (cfg_.n_reduce > dims_.full_readout_width())
        throw std::invalid_argument("pipeline: n_reduce exceeds readout width " +
                                    std::to_string(dims_.full_readout_width()));
    targets_ = make_targets(n_classes);
}

PreparedSet ModelPipeline::prepare(const UtteranceSet& set) const {
    PreparedSet prepared;
    prepared.n_classes = set.labels.size();
    prepared.utterances.reserve(set.utterances.size());
    const bool quat = is_quaternion(cfg_.model);
    for (const auto& utt : set.utterances) {
        PreparedUtterance pu;
        pu.label = utt.label;
        pu.speaker = utt.speaker;
        const auto n_win = static_cast<std::size_t>(utt.midterm.values.cols());
        if (quat) {
            pu.inputs_quat = Mat<Quaternion>(n_win, utt.midterm.n_features);
            for (std::size_t t = 0; t < n_win; ++t) {
                auto col = quat_pack_column(utt.midterm, t);
                for (std::size_t i = 0; i < col.size(); ++i) pu.inputs_quat(t, i) = col[i];
            }
        } else {
            const auto width = static_cast<std::size_t>(utt.midterm.values.rows());
            pu.inputs_real = Mat<double>(n_win, width);
            for (std::size_t t = 0; t < n_win; ++t)
                for (std::size_t i = 0; i < width; ++i)
                    pu.inputs_real(t, i) = utt.midterm.values(static_cast<Eigen::Index>(i),
                                                              static_cast<Eigen::Index>(t));
        }
        prepared.utterances.push_back(std::move(pu));
    }
    return prepared;
}

namespace {

// Windows of [x; u; 1] (or [x; 1]) for one utterance, before any reduction.
template <typename S>
std::vector<std::vector<S>> full_readout_windows(const ReservoirWeights<S>& weights, double lr,
                                                 const Mat<S>& inputs,
                                                 ReadoutStructure structure) {
    StateSequence<S> seq = run_sequence(weights, lr, inputs);
    std::vector<std::vector<S>> out;
    out.reserve(inputs.rows());
    std::vector<S> x(weights.w.rows());
    std::vector<S> u(inputs.cols());
    for (std::size_t t = 0; t < inputs.rows(); ++t) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = seq.states(t, i);
        for (std::size_t j = 0; j < u.size(); ++j) u[j] = inputs(t, j);
        out.push_back(readout_input(x, u, structure));
    }
    return out;
}

}  // namespace

ProjectionBasis ModelPipeline::fit_basis(const BuiltModel& built, const PreparedSet& data) const {
    const double lr = cfg_.reservoir.leaking_rate;
    if (is_quaternion(cfg_.model)) {
        std::vector<Eigen::MatrixXd> samples;
        for (const auto& utt : data.utterances) {
            auto windows =
                full_readout_windows(built.weights_quat, lr, utt.inputs_quat, cfg_.structure);
            for (auto& z : windows) samples.push_back(components_matrix(z));
        }
        return fit_2dpca(samples, cfg_.n_reduce, cfg_.center_at_transform);
    }
    std::size_t total = 0;
    for (const auto& utt : data.utterances) total += utt.inputs_real.rows();
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(total),
                            static_cast<Eigen::Index>(dims_.full_readout_width()));
    Eigen::Index row = 0;
    for (const auto& utt : data.utterances) {
        auto windows =
            full_readout_windows(built.weights_real, lr, utt.inputs_real, cfg_.structure);
        for (const auto& z : windows) samples.row(row++) = to_eigen(z).transpose();
    }
    return fit_pca(samples, cfg_.n_reduce, cfg_.center_at_transform);
}

BuiltModel ModelPipeline::materialize(const ThetaVector& theta) const {
    BuiltModel built;
    built.model = cfg_.model;
    const double sr = cfg_.reservoir.spectral_radius;
    switch (cfg_.model) {
        case Model::esn_ga: {
            auto p = theta_unpack_linear_real(theta, dims_);
            rescale_spectral_radius(p.w, sr);
            built.weights_real = {std::move(p.w_in), std::move(p.w)};
            built.linear_real = {std::move(p.w_out)};
            break;
        }
        case Model::nesn: {
            auto p = theta_unpack_bilinear_real(theta, dims_);
            rescale_spectral_radius(p.w, sr);
            built.weights_real = {std::move(p.w_in), std::move(p.w)};
            built.bilinear_real = std::move(p.readout);
            break;
        }
        case Model::qesn: {
            auto p = theta_unpack_linear_quat(theta, dims_);
            rescale_spectral_radius(p.w, sr);
            built.weights_quat = {std::move(p.w_in), std::move(p.w)};
            built.linear_quat = {std::move(p.w_out)};
            break;
        }
        case Model::qnesn: {
            auto p = theta_unpack_bilinear_quat(theta, dims_);
            rescale_spectral_radius(p.w, sr);
            built.weights_quat = {std::move(p.w_in), std::move(p.w)};
            built.bilinear_quat = std::move(p.readout);
            break;
        }
        case Model::esn:
            throw std::invalid_argument("model 'esn' is ridge-trained and has no genome");
    }
    return built;
}

BuiltModel ModelPipeline::build_from_theta(const ThetaVector& theta,
                                           const PreparedSet& basis_data) const {
    BuiltModel built = materialize(theta);
    if (cfg_.n_reduce > 0) built.basis = fit_basis(built, basis_data);
    return built;
}

BuiltModel ModelPipeline::build_ridge(const PreparedSet& train, std::uint64_t seed) const {
    if (cfg_.model != Model::esn)
        throw std::invalid_argument("build_ridge applies to the 'esn' model only");
    BuiltModel built;
    built.model = cfg_.model;
    ReservoirParams params = cfg_.reservoir;
    params.seed = seed;
    built.weights_real = init_weights_real(params);
    if (cfg_.n_reduce > 0) built.basis = fit_basis(built, train);

    std::size_t total = 0;
    for (const auto& utt : train.utterances) total += utt.inputs_real.rows();
    const std::size_t width = dims_.readout_width();
    Eigen::MatrixXd z(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(total));
    Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(dims_.n_outputs), static_cast<Eigen::Index>(total));
    Eigen::Index col = 0;
    const double lr = cfg_.reservoir.leaking_rate;
    for (const auto& utt : train.utterances) {
        auto windows =
            full_readout_windows(built.weights_real, lr, utt.inputs_real, cfg_.structure);
        for (const auto& w : windows) {
            Eigen::VectorXd zv = to_eigen(w);
            z.col(col) = built.basis ? project_vector(*built.basis, zv) : zv;
            targets(static_cast<Eigen::Index>(utt.label), col) = 1.0;
            ++col;
        }
    }
    built.linear_real = {};
    Eigen::MatrixXd w_out = ridge_readout(z, targets, cfg_.reservoir.ridge_c);
    built.linear_real.w_out = Mat<double>(static_cast<std::size_t>(w_out.rows()),
                                          static_cast<std::size_t>(w_out.cols()));
    for (Eigen::Index i = 0; i < w_out.rows(); ++i)
        for (Eigen::Index j = 0; j < w_out.cols(); ++j)
            built.linear_real.w_out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                w_out(i, j);
    return built;
}

std::vector<Eigen::VectorXd> ModelPipeline::readout_sequence_real(
    const BuiltModel& built, const PreparedUtterance& utt) const {
    const double lr = cfg_.reservoir.leaking_rate;
    auto windows = full_readout_windows(built.weights_real, lr, utt.inputs_real, cfg_.structure);
    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(windows.size());
    const bool bilinear = is_bilinear(cfg_.model);
    BilinearState<double> state;
    if (bilinear) state = BilinearState<double>(dims_.n_outputs, cfg_.filter_order);
    for (const auto& w : windows) {
        std::vector<double> z;
        if (built.basis) {
            Eigen::VectorXd reduced = project_vector(*built.basis, to_eigen(w));
            z = to_std(reduced);
        } else {
            z = w;
        }
        std::vector<double> y;
        if (bilinear) {
            y = bilinear_forward(built.bilinear_real, state, z);
            state.push(y);
        } else {
            y = linear_forward(built.linear_real, z);
        }
        outputs.push_back(to_eigen(y));
    }
    return outputs;
}

std::vector<std::vector<Quaternion>> ModelPipeline::readout_sequence_quat(
    const BuiltModel& built, const PreparedUtterance& utt) const {
    const double lr = cfg_.reservoir.leaking_rate;
    auto windows = full_readout_windows(built.weights_quat, lr, utt.inputs_quat, cfg_.structure);
    std::vector<std::vector<Quaternion>> outputs;
    outputs.reserve(windows.size());
    const bool bilinear = is_bilinear(cfg_.model);
    BilinearState<Quaternion> state;
    if (bilinear) state = BilinearState<Quaternion>(dims_.n_outputs, cfg_.filter_order);
    for (const auto& w : windows) {
        std::vector<Quaternion> z;
        if (built.basis)
            z = quaternions_from_components(project(*built.basis, components_matrix(w)));
        else
            z = w;
        std::vector<Quaternion> y;
        if (bilinear) {
            y = bilinear_forward(built.bilinear_quat, state, z);
            state.push(y);
        } else {
            y = linear_forward(built.linear_quat, z);
        }
        outputs.push_back(std::move(y));
    }
    return outputs;
}

std::size_t ModelPipeline::predict(const BuiltModel& built, const PreparedUtterance& utt) const {
    if (is_quaternion(cfg_.model)) {
        auto outputs = readout_sequence_quat(built, utt);
        Eigen::MatrixXd score = utterance_score(outputs, 0, outputs.size() - 1);
        return classify(score, targets_);
    }
    auto outputs = readout_sequence_real(built, utt);
    Eigen::VectorXd score = utterance_score(outputs, 0, outputs.size() - 1);
    return classify(score);
}

Metrics ModelPipeline::evaluate(const BuiltModel& built, const PreparedSet& data,
                                ConfusionMatrix* confusion) const {
    if (data.utterances.empty()) throw std::invalid_argument("evaluate: empty set");
    ConfusionMatrix local(dims_.n_outputs);
    for (const auto& utt : data.utterances) local.add(utt.label, predict(built, utt));
    if (confusion) *confusion += local;
    return war_uar(local);
}

double ModelPipeline::fitness(const ThetaVector& theta, const PreparedSet& train) const {
    BuiltModel built = build_from_theta(theta, train);
    return evaluate(built, train).war;
}

double ModelPipeline::fitness(const ThetaVector& theta, const UtteranceSet& train) const {
    return fitness(theta, prepare(train));
}

}  // namespace qnesn

#pragma once

#include <cstdint>
#include <optional>

#include "qnesn/bilinear.hpp"
#include "qnesn/dataprep.hpp"
#include "qnesn/dimreduce.hpp"
#include "qnesn/evaluate.hpp"
#include "qnesn/reservoir.hpp"
#include "qnesn/trainer.hpp"
#include "qnesn/types.hpp"

namespace qnesn {

/// Everything a fold needs to turn a genome (or a ridge fit) into
/// predictions: reservoir -> [x; u; 1] -> reduction -> readout -> score.
struct PipelineConfig {
    Model model{Model::qnesn};
    ReservoirParams reservoir;  // n_inputs is derived from the data
    std::size_t n_reduce{0};
    std::size_t filter_order{3};
    ReadoutStructure structure{ReadoutStructure::state_plus_input};
    bool center_at_transform{false};
};

/// Inputs converted once per fold into the network's native scalar.
struct PreparedUtterance {
    std::size_t label{0};
    std::size_t speaker{0};
    Mat<double> inputs_real;      // T' x 4 n_features (real models)
    Mat<Quaternion> inputs_quat;  // T' x n_features (quaternion models)
    std::size_t n_windows() const {
        return inputs_real.rows() > 0 ? inputs_real.rows() : inputs_quat.rows();
    }
};

struct PreparedSet {
    std::vector<PreparedUtterance> utterances;
    std::size_t n_classes{0};
};

/// A candidate materialized for inference: weights with the spectral-radius
/// constraint applied, the readout, and the frozen reduction basis.
struct BuiltModel {
    Model model{Model::qnesn};
    ReservoirWeights<double> weights_real;
    ReservoirWeights<Quaternion> weights_quat;
    LinearReadout<double> linear_real;
    LinearReadout<Quaternion> linear_quat;
    BilinearCoeffs<double> bilinear_real;
    BilinearCoeffs<Quaternion> bilinear_quat;
    std::optional<ProjectionBasis> basis;
};

class ModelPipeline {
public:
    ModelPipeline(const PipelineConfig& cfg, std::size_t n_features, std::size_t n_classes);

    const Dims& dims() const { return dims_; }
    const PipelineConfig& config() const { return cfg_; }
    std::size_t theta_size() const { return theta_length(cfg_.model, dims_); }

    PreparedSet prepare(const UtteranceSet& set) const;

    /// Unpacks theta and rescales W to the configured spectral radius; no
    /// reduction basis is attached yet.
    BuiltModel materialize(const ThetaVector& theta) const;

    /// materialize() plus fitting the reduction basis on basis_data (the
    /// training fold).
    BuiltModel build_from_theta(const ThetaVector& theta, const PreparedSet& basis_data) const;

    /// Ridge-trained baseline (model tag `esn` only): fixed random weights
    /// from the given seed, PCA basis and W_out fitted on the training fold.
    BuiltModel build_ridge(const PreparedSet& train, std::uint64_t seed) const;

    std::size_t predict(const BuiltModel& built, const PreparedUtterance& utt) const;
    Metrics evaluate(const BuiltModel& built, const PreparedSet& data,
                     ConfusionMatrix* confusion = nullptr) const;

    /// Training-fold recognition rate of a genome; the GA objective.
    double fitness(const ThetaVector& theta, const PreparedSet& train) const;
    double fitness(const ThetaVector& theta, const UtteranceSet& train) const;

private:
    PipelineConfig cfg_;
    Dims dims_;
    QuatTargetSet targets_;

    std::vector<Eigen::VectorXd> readout_sequence_real(const BuiltModel& built,
                                                       const PreparedUtterance& utt) const;
    std::vector<std::vector<Quaternion>> readout_sequence_quat(const BuiltModel& built,
                                                               const PreparedUtterance& utt) const;
    ProjectionBasis fit_basis(const BuiltModel& built, const PreparedSet& data) const;
};

}  // namespace qnesn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnesn/bilinear.hpp"
#include "qnesn/dataprep.hpp"
#include "qnesn/dimreduce.hpp"
#include "qnesn/reservoir.hpp"
#include "qnesn/types.hpp"

namespace qnesn {

/// Raw little-endian doubles, no header; metadata lives in JSON sidecars.
void write_doubles(const std::string& path, const std::vector<double>& values);
std::vector<double> read_doubles(const std::string& path);

/// Genome + sidecar header (model tag, dims, filter order).
void save_theta(const std::string& bin_path, const std::string& header_path,
                const ThetaVector& theta, Model model, const Dims& dims);
ThetaVector load_theta(const std::string& bin_path, const std::string& header_path,
                       Model* model = nullptr, Dims* dims = nullptr);

/// Everything needed to re-run a trained fold on new data: genome (or ridge
/// W_out for the plain esn), frozen reduction basis, frame normalization,
/// label/speaker vocabularies and the reservoir configuration.
struct Checkpoint {
    Model model{Model::esn};
    Dims dims;
    ReservoirParams reservoir;
    std::size_t window{40};
    std::size_t shift{10};
    bool normalize{true};
    std::vector<std::string> labels;
    std::vector<std::string> speakers;
    FrameNormalization norm;
    ThetaVector theta;
    bool has_basis{false};
    ProjectionBasis basis;
    double train_fitness{0.0};
    std::size_t generations{0};
    std::string stop_reason;
    std::string config_hash;
    std::uint64_t seed{0};
};

void save_checkpoint(const std::string& dir, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& dir);

/// FNV-1a over a canonical string; used to stamp manifests and checkpoints.
std::string fnv1a_hex(const std::string& text);

}  // namespace qnesn

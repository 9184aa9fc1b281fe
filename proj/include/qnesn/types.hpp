#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qnesn {

/// Network variants. esn uses a ridge-fitted linear readout; the other four
/// are trained end-to-end by the genetic algorithm.
enum class Model { esn, esn_ga, nesn, qesn, qnesn };

inline bool is_quaternion(Model m) { return m == Model::qesn || m == Model::qnesn; }
inline bool is_bilinear(Model m) { return m == Model::nesn || m == Model::qnesn; }
inline bool is_ga_trained(Model m) { return m != Model::esn; }

inline std::string to_string(Model m) {
    switch (m) {
        case Model::esn: return "esn";
        case Model::esn_ga: return "esn-ga";
        case Model::nesn: return "nesn";
        case Model::qesn: return "qesn";
        case Model::qnesn: return "qnesn";
    }
    return "?";
}

inline Model parse_model(const std::string& s) {
    if (s == "esn") return Model::esn;
    if (s == "esn-ga" || s == "esn_ga") return Model::esn_ga;
    if (s == "nesn") return Model::nesn;
    if (s == "qesn") return Model::qesn;
    if (s == "qnesn") return Model::qnesn;
    throw std::invalid_argument("unknown model tag: " + s);
}

enum class ReadoutStructure { state_only, state_plus_input };

/// Structural sizes shared by packing, the pipeline, and the sweep tables.
/// n_inputs counts units in the network's native scalar: real features for
/// real models, quaternions for quaternion models. n_reduce = 0 disables the
/// reduction stage (the readout then sees the full [x; u; 1] vector).
struct Dims {
    std::size_t n_units{0};    // reservoir units
    std::size_t n_inputs{0};   // input units, bias excluded
    std::size_t n_outputs{0};  // classes
    std::size_t n_reduce{0};   // PCA / 2dPCA target dimension (0 = off)
    std::size_t filter_order{2};
    ReadoutStructure structure{ReadoutStructure::state_plus_input};

    std::size_t input_width() const { return n_inputs + 1; }  // bias column
    std::size_t full_readout_width() const {
        return structure == ReadoutStructure::state_plus_input ? n_units + n_inputs + 1
                                                               : n_units + 1;
    }
    std::size_t readout_width() const {
        return n_reduce > 0 ? n_reduce : full_readout_width();
    }
};

inline std::string to_string(ReadoutStructure s) {
    return s == ReadoutStructure::state_only ? "state_only" : "state_plus_input";
}

inline ReadoutStructure parse_structure(const std::string& s) {
    if (s == "state_only") return ReadoutStructure::state_only;
    if (s == "state_plus_input") return ReadoutStructure::state_plus_input;
    throw std::invalid_argument("unknown readout structure: " + s);
}

}  // namespace qnesn

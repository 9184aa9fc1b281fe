#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qnesn/quaternion.hpp"

namespace qnesn {

/// Frame-level features of one utterance: values is n_features x n_frames.
struct FrameMatrix {
    std::string utterance_id;
    std::string speaker_id;
    std::string label;
    Eigen::MatrixXd values;

    std::size_t n_features() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t n_frames() const { return static_cast<std::size_t>(values.cols()); }
};

/// Mid-term statistics over sliding windows. Rows stack the four statistic
/// blocks [mean; std; skewness; kurtosis], each n_features tall, one column
/// per complete window.
struct MidtermSequence {
    Eigen::MatrixXd values;  // 4 n_features x n_windows
    std::size_t n_features{0};
    std::size_t window{0};   // window length in frames (the paper's 2W)
    std::size_t shift{0};    // hop K in frames
};

/// Population moments: std divides by n, skewness = m3 / sigma^3, kurtosis =
/// m4 / sigma^4 (non-excess); a zero-variance window yields skew = kurt = 0.
MidtermSequence midterm_windows(const FrameMatrix& frames, std::size_t window, std::size_t shift);

/// Quaternion packing of a mid-term column t: U_i(t) = (mean_i, std_i,
/// skew_i, kurt_i) for feature i.
std::vector<Quaternion> quat_pack_column(const MidtermSequence& seq, std::size_t t);

std::size_t window_count(std::size_t n_frames, std::size_t window, std::size_t shift);

// --- Frame feature files -------------------------------------------------

/// CSV schema: header `utterance_id,speaker_id,label,frame_index,f_0,...`;
/// frames of an utterance contiguous and ordered by frame_index from 0.
std::vector<FrameMatrix> load_frames(const std::string& path,
                                     const std::vector<std::string>& allowed_labels = {});
void save_frames(const std::string& path, const std::vector<FrameMatrix>& frames);

// --- Synthetic dataset ----------------------------------------------------

/// Desk-scale labeled sequence generator. Classes differ by AR(1) smoothness
/// and sinusoid frequency; speakers add per-feature offsets, so class
/// evidence survives leave-one-speaker-out splits while speaker identity
/// mostly shifts window means.
struct SynthSpec {
    std::size_t n_classes{3};
    std::size_t n_speakers{4};
    std::size_t utterances_per{3};  // per speaker per class
    std::size_t frames{120};
    std::size_t n_features{6};
    std::uint64_t seed{1};

    void validate() const;
};

std::vector<FrameMatrix> synth_dataset(const SynthSpec& spec);

// --- Per-fold preparation ---------------------------------------------------

/// One utterance after normalization and windowing, labels and speakers
/// resolved to indices.
struct Utterance {
    std::string utterance_id;
    std::size_t speaker{0};
    std::size_t label{0};
    MidtermSequence midterm;
};

struct UtteranceSet {
    std::vector<Utterance> utterances;
    std::vector<std::string> labels;    // index -> name, sorted
    std::vector<std::string> speakers;  // index -> name, sorted
    std::size_t n_features{0};
};

/// Per-feature z-normalization statistics estimated on training frames.
struct FrameNormalization {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
};

FrameNormalization fit_normalization(const std::vector<FrameMatrix>& frames,
                                     const std::vector<std::size_t>& indices);
FrameMatrix apply_normalization(const FrameNormalization& norm, const FrameMatrix& frames);

/// Windows the selected utterances with shared label/speaker vocabularies.
UtteranceSet build_utterance_set(const std::vector<FrameMatrix>& frames,
                                 const std::vector<std::size_t>& indices,
                                 const FrameNormalization* norm, std::size_t window,
                                 std::size_t shift, const std::vector<std::string>& labels,
                                 const std::vector<std::string>& speakers);

std::vector<std::string> collect_labels(const std::vector<FrameMatrix>& frames);
std::vector<std::string> collect_speakers(const std::vector<FrameMatrix>& frames);

}  // namespace qnesn

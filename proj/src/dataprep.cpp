#include "qnesn/dataprep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qnesn {

std::size_t window_count(std::size_t n_frames, std::size_t window, std::size_t shift) {
    if (window == 0 || shift == 0)
        throw std::invalid_argument("window and shift must be >= 1 frame");
    if (window > n_frames) return 0;
    return (n_frames - window) / shift + 1;
}

MidtermSequence midterm_windows(const FrameMatrix& frames, std::size_t window, std::size_t shift) {
    const std::size_t n_feat = frames.n_features();
    const std::size_t n_frames = frames.n_frames();
    const std::size_t n_win = window_count(n_frames, window, shift);
    if (n_win == 0)
        throw std::invalid_argument("utterance '" + frames.utterance_id + "' too short: " +
                                    std::to_string(n_frames) + " frames < window of " +
                                    std::to_string(window));

    MidtermSequence seq;
    seq.n_features = n_feat;
    seq.window = window;
    seq.shift = shift;
    seq.values.resize(static_cast<Eigen::Index>(4 * n_feat), static_cast<Eigen::Index>(n_win));

    const double n = static_cast<double>(window);
    for (std::size_t w = 0; w < n_win; ++w) {
        const std::size_t start = w * shift;
        for (std::size_t i = 0; i < n_feat; ++i) {
            double mean = 0.0;
            for (std::size_t t = 0; t < window; ++t)
                mean += frames.values(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(start + t));
            mean /= n;
            double m2 = 0.0, m3 = 0.0, m4 = 0.0;
            for (std::size_t t = 0; t < window; ++t) {
                const double d = frames.values(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(start + t)) -
                                 mean;
                const double d2 = d * d;
                m2 += d2;
                m3 += d2 * d;
                m4 += d2 * d2;
            }
            m2 /= n;
            m3 /= n;
            m4 /= n;
            const double sigma = std::sqrt(m2);
            const double skew = sigma > 0.0 ? m3 / (sigma * sigma * sigma) : 0.0;
            const double kurt = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
            const auto col = static_cast<Eigen::Index>(w);
            seq.values(static_cast<Eigen::Index>(i), col) = mean;
            seq.values(static_cast<Eigen::Index>(n_feat + i), col) = sigma;
            seq.values(static_cast<Eigen::Index>(2 * n_feat + i), col) = skew;
            seq.values(static_cast<Eigen::Index>(3 * n_feat + i), col) = kurt;
        }
    }
    return seq;
}

std::vector<Quaternion> quat_pack_column(const MidtermSequence& seq, std::size_t t) {
    const std::size_t n = seq.n_features;
    std::vector<Quaternion> u(n);
    const auto col = static_cast<Eigen::Index>(t);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = {seq.values(static_cast<Eigen::Index>(i), col),
                seq.values(static_cast<Eigen::Index>(n + i), col),
                seq.values(static_cast<Eigen::Index>(2 * n + i), col),
                seq.values(static_cast<Eigen::Index>(3 * n + i), col)};
    return u;
}

// --- CSV io -----------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<FrameMatrix> load_frames(const std::string& path,
                                     const std::vector<std::string>& allowed_labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open frame file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file, no utterances");
    auto header = split_csv(line);
    if (header.size() < 5 || header[0] != "utterance_id" || header[1] != "speaker_id" ||
        header[2] != "label" || header[3] != "frame_index")
        throw std::runtime_error(path + ": line 1: bad header, expected "
                                 "utterance_id,speaker_id,label,frame_index,f_0,...");
    const std::size_t n_feat = header.size() - 4;

    struct Raw {
        std::string speaker, label;
        std::vector<std::vector<double>> rows;
    };
    std::vector<std::pair<std::string, Raw>> order;  // keeps file order
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        const std::string& utt = fields[0];
        if (!allowed_labels.empty() &&
            std::find(allowed_labels.begin(), allowed_labels.end(), fields[2]) ==
                allowed_labels.end())
            throw std::runtime_error("line " + std::to_string(line_no) + ": unknown label '" +
                                     fields[2] + "'");
        if (order.empty() || order.back().first != utt) {
            for (const auto& [id, raw] : order)
                if (id == utt)
                    throw std::runtime_error("line " + std::to_string(line_no) + ": utterance '" +
                                             utt + "' is not contiguous");
            order.emplace_back(utt, Raw{fields[1], fields[2], {}});
        }
        Raw& raw = order.back().second;
        if (raw.speaker != fields[1] || raw.label != fields[2])
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": speaker/label changed mid-utterance");
        const auto frame_index =
            static_cast<std::size_t>(parse_double(fields[3], line_no));
        if (frame_index != raw.rows.size())
            throw std::runtime_error("line " + std::to_string(line_no) + ": frame_index " +
                                     std::to_string(frame_index) + " out of order (expected " +
                                     std::to_string(raw.rows.size()) + ")");
        std::vector<double> feats(n_feat);
        for (std::size_t i = 0; i < n_feat; ++i) feats[i] = parse_double(fields[4 + i], line_no);
        raw.rows.push_back(std::move(feats));
    }
    if (order.empty()) throw std::runtime_error(path + ": no utterances");

    std::vector<FrameMatrix> frames;
    frames.reserve(order.size());
    for (auto& [id, raw] : order) {
        FrameMatrix fm;
        fm.utterance_id = id;
        fm.speaker_id = raw.speaker;
        fm.label = raw.label;
        fm.values.resize(static_cast<Eigen::Index>(n_feat),
                         static_cast<Eigen::Index>(raw.rows.size()));
        for (std::size_t t = 0; t < raw.rows.size(); ++t)
            for (std::size_t i = 0; i < n_feat; ++i)
                fm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
                    raw.rows[t][i];
        frames.push_back(std::move(fm));
    }
    return frames;
}

void save_frames(const std::string& path, const std::vector<FrameMatrix>& frames) {
    if (frames.empty()) throw std::invalid_argument("save_frames: nothing to write");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write frame file: " + path);
    const std::size_t n_feat = frames.front().n_features();
    out << "utterance_id,speaker_id,label,frame_index";
    for (std::size_t i = 0; i < n_feat; ++i) out << ",f_" << i;
    out << '\n';
    for (const auto& fm : frames) {
        if (fm.n_features() != n_feat)
            throw std::invalid_argument("save_frames: inconsistent feature counts");
        for (std::size_t t = 0; t < fm.n_frames(); ++t) {
            out << fm.utterance_id << ',' << fm.speaker_id << ',' << fm.label << ',' << t;
            for (std::size_t i = 0; i < n_feat; ++i)
                out << ',' << format_double(fm.values(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(t)));
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// --- Synthetic data -----------------------------------------------------------

void SynthSpec::validate() const {
    if (n_classes < 1 || n_speakers < 1 || utterances_per < 1 || frames < 1 || n_features < 1)
        throw std::invalid_argument("synth: all counts must be >= 1");
}

std::vector<FrameMatrix> synth_dataset(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Class signatures: oscillation frequency and AR(1) smoothness.
    std::vector<double> omega(spec.n_classes), phi(spec.n_classes);
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
        const double f = spec.n_classes > 1 ? static_cast<double>(c) / (spec.n_classes - 1) : 0.0;
        omega[c] = 0.25 + 1.20 * f;
        phi[c] = 0.15 + 0.75 * f;
    }

    // Speaker offsets shift window means without touching the class cues.
    std::vector<std::vector<double>> offset(spec.n_speakers,
                                            std::vector<double>(spec.n_features));
    for (auto& per_speaker : offset)
        for (auto& v : per_speaker) v = 1.2 * (2.0 * u01(rng) - 1.0);

    std::vector<FrameMatrix> out;
    out.reserve(spec.n_speakers * spec.n_classes * spec.utterances_per);
    std::size_t utt_counter = 0;
    for (std::size_t s = 0; s < spec.n_speakers; ++s) {
        for (std::size_t c = 0; c < spec.n_classes; ++c) {
            for (std::size_t k = 0; k < spec.utterances_per; ++k) {
                FrameMatrix fm;
                fm.utterance_id = "utt" + std::to_string(utt_counter++);
                fm.speaker_id = "spk" + std::to_string(s);
                fm.label = "class" + std::to_string(c);
                fm.values.resize(static_cast<Eigen::Index>(spec.n_features),
                                 static_cast<Eigen::Index>(spec.frames));
                for (std::size_t i = 0; i < spec.n_features; ++i) {
                    const double phase = 2.0 * M_PI * u01(rng);
                    const double amp = 0.8 + 0.4 * u01(rng);
                    double ar = 0.0;
                    for (std::size_t t = 0; t < spec.frames; ++t) {
                        ar = phi[c] * ar + 0.3 * gauss(rng);
                        fm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
                            offset[s][i] + amp * std::sin(omega[c] * static_cast<double>(t) + phase) +
                            ar;
                    }
                }
                out.push_back(std::move(fm));
            }
        }
    }
    return out;
}

// --- Fold preparation -----------------------------------------------------------

FrameNormalization fit_normalization(const std::vector<FrameMatrix>& frames,
                                     const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw std::invalid_argument("fit_normalization: empty fold");
    const auto n_feat = frames[indices.front()].values.rows();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_feat);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n_feat);
    std::size_t count = 0;
    for (std::size_t idx : indices) {
        const auto& v = frames[idx].values;
        if (v.rows() != n_feat)
            throw std::invalid_argument("fit_normalization: inconsistent feature counts");
        sum += v.rowwise().sum();
        sum_sq += v.array().square().matrix().rowwise().sum();
        count += static_cast<std::size_t>(v.cols());
    }
    FrameNormalization norm;
    norm.mean = sum / static_cast<double>(count);
    Eigen::VectorXd var =
        sum_sq / static_cast<double>(count) - norm.mean.array().square().matrix();
    norm.std = var.array().max(0.0).sqrt();
    for (Eigen::Index i = 0; i < norm.std.size(); ++i)
        if (norm.std(i) < 1e-12) norm.std(i) = 1.0;  // constant feature: leave centered only
    return norm;
}

FrameMatrix apply_normalization(const FrameNormalization& norm, const FrameMatrix& frames) {
    FrameMatrix out = frames;
    out.values = (frames.values.colwise() - norm.mean).array().colwise() / norm.std.array();
    return out;
}

std::vector<std::string> collect_labels(const std::vector<FrameMatrix>& frames) {
    std::set<std::string> set;
    for (const auto& f : frames) set.insert(f.label);
    return {set.begin(), set.end()};
}

std::vector<std::string> collect_speakers(const std::vector<FrameMatrix>& frames) {
    std::set<std::string> set;
    for (const auto& f : frames) set.insert(f.speaker_id);
    return {set.begin(), set.end()};
}

UtteranceSet build_utterance_set(const std::vector<FrameMatrix>& frames,
                                 const std::vector<std::size_t>& indices,
                                 const FrameNormalization* norm, std::size_t window,
                                 std::size_t shift, const std::vector<std::string>& labels,
                                 const std::vector<std::string>& speakers) {
    UtteranceSet set;
    set.labels = labels;
    set.speakers = speakers;
    auto index_of = [](const std::vector<std::string>& v, const std::string& s,
                       const char* what) {
        auto it = std::find(v.begin(), v.end(), s);
        if (it == v.end())
            throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
        return static_cast<std::size_t>(it - v.begin());
    };
    for (std::size_t idx : indices) {
        const FrameMatrix& raw = frames[idx];
        FrameMatrix prepared = norm ? apply_normalization(*norm, raw) : raw;
        Utterance utt;
        utt.utterance_id = raw.utterance_id;
        utt.speaker = index_of(speakers, raw.speaker_id, "speaker");
        utt.label = index_of(labels, raw.label, "label");
        utt.midterm = midterm_windows(prepared, window, shift);
        set.n_features = utt.midterm.n_features;
        set.utterances.push_back(std::move(utt));
    }
    return set;
}

}  // namespace qnesn

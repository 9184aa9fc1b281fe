#include "qnesn/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qnesn/serialize.hpp"

namespace qnesn {

namespace {

struct FoldData {
    std::string test_speaker;
    PreparedSet train;
    PreparedSet test;
    UtteranceSet train_set;  // kept for checkpoint metadata
    FrameNormalization norm;
};

std::string kv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

RunResult run_one(const ModelPipeline& pipeline, const FoldData& fold, std::size_t fold_index,
                  std::uint64_t seed, const ExperimentConfig& cfg,
                  const std::vector<std::string>& labels,
                  const std::vector<std::string>& speakers) {
    RunResult result;
    result.fold = fold_index;
    result.test_speaker = fold.test_speaker;
    result.seed = seed;
    result.confusion = ConfusionMatrix(labels.size());

    BuiltModel built;
    ThetaVector theta;
    if (cfg.pipeline.model == Model::esn) {
        built = pipeline.build_ridge(fold.train, seed);
        result.train_fitness = pipeline.evaluate(built, fold.train).war;
        const auto& w = built.linear_real.w_out;
        theta.assign(w.data().begin(), w.data().end());
    } else {
        GaConfig ga = cfg.ga;
        ga.seed = seed;
        const auto objective = [&](const ThetaVector& candidate) {
            return pipeline.fitness(candidate, fold.train);
        };
        GaResult ga_result = ga_optimize(objective, pipeline.theta_size(), ga);
        theta = std::move(ga_result.best_theta);
        built = pipeline.build_from_theta(theta, fold.train);
        result.train_fitness = ga_result.best_fitness;
        result.generations = ga_result.generations;
        result.stop_reason = ga_result.stop_reason;
    }

    const auto start = std::chrono::steady_clock::now();
    result.test = pipeline.evaluate(built, fold.test, &result.confusion);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.n_test = fold.test.utterances.size();
    result.seconds_per_utterance = elapsed.count() / static_cast<double>(result.n_test);

    if (!cfg.checkpoint_dir.empty()) {
        Checkpoint c;
        c.model = cfg.pipeline.model;
        c.dims = pipeline.dims();
        c.reservoir = pipeline.config().reservoir;
        c.reservoir.seed = seed;
        c.window = cfg.window;
        c.shift = cfg.shift;
        c.normalize = cfg.normalize;
        c.labels = labels;
        c.speakers = speakers;
        if (cfg.normalize) c.norm = fold.norm;
        c.theta = theta;
        c.train_fitness = result.train_fitness;
        c.generations = result.generations;
        c.stop_reason = result.stop_reason;
        c.seed = seed;
        if (built.basis) {
            c.has_basis = true;
            c.basis = *built.basis;
        }
        save_checkpoint(cfg.checkpoint_dir + "/fold_" + std::to_string(fold_index) + "_seed_" +
                            std::to_string(seed),
                        c);
    }
    return result;
}

}  // namespace

ExperimentReport run_experiment(const std::vector<FrameMatrix>& data,
                                const ExperimentConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("run_experiment: no data");
    if (cfg.seeds.empty()) throw std::invalid_argument("run_experiment: no seeds configured");
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.model = cfg.pipeline.model;
    report.labels = collect_labels(data);
    report.speakers = collect_speakers(data);
    report.confusion = ConfusionMatrix(report.labels.size());
    if (report.labels.size() == 1)
        report.warnings.push_back("single-class dataset: recognition rate is trivially 1");

    const std::size_t n_features = data.front().n_features();
    ModelPipeline pipeline(cfg.pipeline, n_features, report.labels.size());

    const auto folds = loso_split(data);
    std::vector<FoldData> fold_data(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        FoldData& fd = fold_data[f];
        fd.test_speaker = folds[f].test_speaker;
        const FrameNormalization* norm = nullptr;
        if (cfg.normalize) {
            fd.norm = fit_normalization(data, folds[f].train);
            norm = &fd.norm;
        }
        fd.train_set = build_utterance_set(data, folds[f].train, norm, cfg.window, cfg.shift,
                                           report.labels, report.speakers);
        UtteranceSet test_set = build_utterance_set(data, folds[f].test, norm, cfg.window,
                                                    cfg.shift, report.labels, report.speakers);
        fd.train = pipeline.prepare(fd.train_set);
        fd.test = pipeline.prepare(test_set);
    }

    // Tasks are (fold, seed) pairs in fixed order; results land in fixed
    // slots so the aggregation order never depends on scheduling.
    struct Task {
        std::size_t fold;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (std::size_t f = 0; f < folds.size(); ++f)
        for (std::uint64_t seed : cfg.seeds) tasks.push_back({f, seed});
    report.runs.resize(tasks.size());

    const std::size_t n_threads =
        std::max<std::size_t>(1, std::min(cfg.threads, tasks.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                report.runs[i] = run_one(pipeline, fold_data[tasks[i].fold], tasks[i].fold,
                                         tasks[i].seed, cfg, report.labels, report.speakers);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    for (const auto& run : report.runs) {
        report.mean.war += run.test.war;
        report.mean.uar += run.test.uar;
        report.confusion += run.confusion;
    }
    report.mean.war /= static_cast<double>(report.runs.size());
    report.mean.uar /= static_cast<double>(report.runs.size());
    const std::chrono::duration<double> total = std::chrono::steady_clock::now() - t0;
    report.total_seconds = total.count();
    return report;
}

std::string format_report(const ExperimentReport& report) {
    std::ostringstream os;
    os << "model: " << to_string(report.model) << "\n";
    os << "folds: " << report.speakers.size() << "  runs: " << report.runs.size() << "\n";
    for (const auto& warning : report.warnings) os << "warning: " << warning << "\n";
    os << "\nfold  seed  speaker        WAR       UAR       train_fit  gens\n";
    for (const auto& run : report.runs) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-5zu %-5llu %-12s %9.6f %9.6f %10.6f %5zu\n",
                      run.fold, static_cast<unsigned long long>(run.seed),
                      run.test_speaker.c_str(), run.test.war, run.test.uar, run.train_fitness,
                      run.generations);
        os << line;
    }
    os << "\nmean WAR " << kv_double(report.mean.war) << "  mean UAR "
       << kv_double(report.mean.uar) << "\n";
    os << "\nconfusion (rows = true, cols = predicted):\n";
    os << "            ";
    for (const auto& label : report.labels) {
        char cell[32];
        std::snprintf(cell, sizeof(cell), "%10s", label.c_str());
        os << cell;
    }
    os << "\n";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        char head[32];
        std::snprintf(head, sizeof(head), "%-12s", report.labels[i].c_str());
        os << head;
        for (std::size_t j = 0; j < report.labels.size(); ++j) {
            char cell[32];
            std::snprintf(cell, sizeof(cell), "%10d",
                          report.confusion.counts(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j)));
            os << cell;
        }
        os << "\n";
    }
    return os.str();
}

std::string format_report_kv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "model=" << to_string(report.model) << "\n";
    os << "n_folds=" << report.speakers.size() << "\n";
    os << "n_runs=" << report.runs.size() << "\n";
    os << "n_classes=" << report.labels.size() << "\n";
    os << "mean_war=" << kv_double(report.mean.war) << "\n";
    os << "mean_uar=" << kv_double(report.mean.uar) << "\n";
    for (const auto& run : report.runs) {
        const std::string prefix =
            "run." + std::to_string(run.fold) + "." + std::to_string(run.seed);
        os << prefix << ".speaker=" << run.test_speaker << "\n";
        os << prefix << ".war=" << kv_double(run.test.war) << "\n";
        os << prefix << ".uar=" << kv_double(run.test.uar) << "\n";
        os << prefix << ".train_fitness=" << kv_double(run.train_fitness) << "\n";
        os << prefix << ".generations=" << run.generations << "\n";
        os << prefix << ".n_test=" << run.n_test << "\n";
    }
    for (std::size_t i = 0; i < report.labels.size(); ++i)
        for (std::size_t j = 0; j < report.labels.size(); ++j)
            os << "confusion." << report.labels[i] << "." << report.labels[j] << "="
               << report.confusion.counts(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j))
               << "\n";
    for (const auto& warning : report.warnings) os << "warning=" << warning << "\n";
    return os.str();
}

std::string format_timing_kv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "total_seconds=" << kv_double(report.total_seconds) << "\n";
    for (const auto& run : report.runs)
        os << "run." << run.fold << "." << run.seed
           << ".seconds_per_utterance=" << kv_double(run.seconds_per_utterance) << "\n";
    return os.str();
}

}  // namespace qnesn

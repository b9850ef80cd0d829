#include "scp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "scp/error.hpp"
#include "scp/kernels.hpp"
#include "scp/rng.hpp"

namespace scp {

namespace {

void check_ratio(double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ValidationError("split ratio must lie in (0, 1), got " + std::to_string(ratio));
    }
}

// Scores precomputed once per sweep: row i of `scores` spans
// [offsets[i], offsets[i + 1]).
struct ScoredData {
    std::vector<double> scores;
    std::vector<std::size_t> offsets;
    std::vector<double> truth_scores;

    explicit ScoredData(const Dataset& data) {
        offsets.reserve(data.size() + 1);
        offsets.push_back(0);
        truth_scores.reserve(data.size());
        for (const auto& rec : data.records()) {
            const ScoreVector row = nonconformity_scores(frequency_distribution(rec));
            scores.insert(scores.end(), row.begin(), row.end());
            offsets.push_back(scores.size());
            truth_scores.push_back(row[rec.truth_index]);
        }
    }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(scores).subspan(offsets[i], offsets[i + 1] - offsets[i]);
    }
};

// One partition gathered into contiguous buffers for the vector kernels.
struct TrialBuffers {
    std::vector<double> sorted_calibration;
    std::vector<double> test_scores;
    std::vector<double> test_truth;

    TrialBuffers(const ScoredData& scored, const Partition& part) {
        sorted_calibration.reserve(part.calibration.size());
        for (std::size_t i : part.calibration) sorted_calibration.push_back(scored.truth_scores[i]);
        std::sort(sorted_calibration.begin(), sorted_calibration.end());
        test_truth.reserve(part.test.size());
        for (std::size_t i : part.test) {
            const auto row = scored.row(i);
            test_scores.insert(test_scores.end(), row.begin(), row.end());
            test_truth.push_back(scored.truth_scores[i]);
        }
    }

    TrialResult evaluate(RiskLevel level) const {
        const auto& k = kernels::active();
        const Threshold thr = threshold_from_sorted(sorted_calibration, level);
        const std::size_t m = test_truth.size();
        std::size_t covered = m;
        std::size_t members = test_scores.size();
        if (!thr.is_include_all()) {
            covered = k.count_at_most(test_truth, thr.tau());
            members = k.count_at_most(test_scores, thr.tau());
        }
        TrialResult r;
        r.empirical_error_rate = static_cast<double>(m - covered) / static_cast<double>(m);
        r.empirical_coverage = 1.0 - r.empirical_error_rate;
        r.average_set_size = static_cast<double>(members) / static_cast<double>(m);
        r.calibration_size = sorted_calibration.size();
        r.test_size = m;
        return r;
    }
};

// Runs body(i) for i in [0, count) on a pool of workers. The first exception
// thrown by any worker is rethrown once all workers have stopped.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void aggregate(SweepResult& out) {
    const double t = static_cast<double>(out.trials);
    for (const auto& trials : out.per_trial) {
        double err = 0.0, cov = 0.0, size = 0.0;
        for (const auto& r : trials) {
            err += r.empirical_error_rate;
            cov += r.empirical_coverage;
            size += r.average_set_size;
        }
        err /= t;
        cov /= t;
        size /= t;
        double err_var = 0.0, cov_var = 0.0;
        for (const auto& r : trials) {
            err_var += (r.empirical_error_rate - err) * (r.empirical_error_rate - err);
            cov_var += (r.empirical_coverage - cov) * (r.empirical_coverage - cov);
        }
        out.mean_error.push_back(err);
        out.std_error.push_back(std::sqrt(err_var / t));
        out.mean_coverage.push_back(cov);
        out.std_coverage.push_back(std::sqrt(cov_var / t));
        out.mean_set_size.push_back(size);
        out.calibration_size.push_back(trials.front().calibration_size);
        out.test_size.push_back(trials.front().test_size);
    }
}

void check_sweep_inputs(const Dataset& data, const SweepOptions& options) {
    if (options.trials < 1) throw ValidationError("trials must be at least 1");
    if (data.size() < 2) throw ValidationError("need at least 2 records to split");
}

}  // namespace

std::size_t calibration_count(std::size_t n, double ratio) {
    check_ratio(ratio);
    if (n < 2) throw ValidationError("need at least 2 records to split, got " + std::to_string(n));
    const auto raw = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
    return std::clamp<std::size_t>(raw, 1, n - 1);
}

Partition split_indices(std::size_t n, double ratio, std::mt19937_64& rng) {
    const std::size_t n_cal = calibration_count(n, ratio);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    Partition p;
    p.calibration.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_cal));
    p.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_cal), order.end());
    return p;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double ratio, std::mt19937_64& rng) {
    const Partition p = split_indices(data.size(), ratio, rng);
    auto pick = [&](const std::vector<std::size_t>& idx) {
        std::vector<QuestionRecord> recs;
        recs.reserve(idx.size());
        for (std::size_t i : idx) recs.push_back(data[i]);
        return Dataset(std::move(recs), data.sampling_count());
    };
    return {pick(p.calibration), pick(p.test)};
}

double empirical_error_rate(std::span<const PredictionSet> sets, std::span<const std::size_t> truths) {
    if (sets.size() != truths.size()) {
        throw ValidationError("sets and truths differ in length (" + std::to_string(sets.size()) + " vs " +
                              std::to_string(truths.size()) + ")");
    }
    if (sets.empty()) throw ValidationError("empirical error rate of an empty test set");
    std::size_t misses = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) misses += sets[i].contains(truths[i]) ? 0 : 1;
    return static_cast<double>(misses) / static_cast<double>(sets.size());
}

double average_set_size(std::span<const PredictionSet> sets) {
    if (sets.empty()) throw ValidationError("average set size of an empty list");
    std::size_t total = 0;
    for (const auto& s : sets) total += s.size();
    return static_cast<double>(total) / static_cast<double>(sets.size());
}

TrialResult evaluate_partition(const Dataset& data, const Partition& part, RiskLevel level) {
    if (part.calibration.empty() || part.test.empty()) throw ValidationError("degenerate partition");

    std::vector<double> cal_scores;
    cal_scores.reserve(part.calibration.size());
    for (std::size_t i : part.calibration) {
        const auto& rec = data[i];
        cal_scores.push_back(calibration_score(frequency_distribution(rec), rec.truth_index));
    }
    const Threshold thr = conformal_threshold(CalibrationScores(std::move(cal_scores)), level);

    std::vector<PredictionSet> sets;
    std::vector<std::size_t> truths;
    sets.reserve(part.test.size());
    truths.reserve(part.test.size());
    for (std::size_t i : part.test) {
        const auto& rec = data[i];
        sets.push_back(prediction_set(frequency_distribution(rec), thr));
        truths.push_back(rec.truth_index);
    }

    TrialResult r;
    r.empirical_error_rate = empirical_error_rate(sets, truths);
    r.empirical_coverage = 1.0 - r.empirical_error_rate;
    r.average_set_size = average_set_size(sets);
    r.calibration_size = part.calibration.size();
    r.test_size = part.test.size();
    return r;
}

TrialResult run_trial(const Dataset& data, double ratio, RiskLevel level, std::mt19937_64& rng) {
    return evaluate_partition(data, split_indices(data.size(), ratio, rng), level);
}

SweepResult sweep_alpha(const Dataset& data, double ratio, std::span<const double> alphas,
                        const SweepOptions& options) {
    check_sweep_inputs(data, options);
    check_ratio(ratio);
    if (alphas.empty()) throw ValidationError("alpha list is empty");
    std::vector<RiskLevel> levels;
    for (double a : alphas) levels.emplace_back(a);

    const ScoredData scored(data);
    SweepResult out;
    out.axis.assign(alphas.begin(), alphas.end());
    out.trials = options.trials;
    out.per_trial.assign(levels.size(), std::vector<TrialResult>(options.trials));

    parallel_for(options.trials, options.workers, [&](std::size_t t) {
        auto rng = make_stream(options.seed, t);
        const TrialBuffers buffers(scored, split_indices(data.size(), ratio, rng));
        for (std::size_t a = 0; a < levels.size(); ++a) out.per_trial[a][t] = buffers.evaluate(levels[a]);
    });
    aggregate(out);
    return out;
}

SweepResult sweep_split(const Dataset& data, std::span<const double> ratios, RiskLevel level,
                        const SweepOptions& options) {
    check_sweep_inputs(data, options);
    if (ratios.empty()) throw ValidationError("split ratio list is empty");
    for (double r : ratios) check_ratio(r);

    const ScoredData scored(data);
    SweepResult out;
    out.axis.assign(ratios.begin(), ratios.end());
    out.trials = options.trials;
    out.per_trial.assign(ratios.size(), std::vector<TrialResult>(options.trials));

    parallel_for(options.trials, options.workers, [&](std::size_t t) {
        for (std::size_t r = 0; r < ratios.size(); ++r) {
            auto rng = make_stream(options.seed, t);
            const TrialBuffers buffers(scored, split_indices(data.size(), ratios[r], rng));
            out.per_trial[r][t] = buffers.evaluate(level);
        }
    });
    aggregate(out);
    return out;
}

}  // namespace scp

#pragma once
// Repeated random calibration/test splits, the two headline metrics, and
// sweeps over alpha or split ratio.
//
// Trial t draws its partition from make_stream(seed, t). A sweep reuses that
// partition for every axis point, so curves are compared on identical splits,
// and the outcome does not depend on how many workers run the trials.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "scp/answer_distribution.hpp"
#include "scp/conformal.hpp"

namespace scp {

struct TrialResult {
    double empirical_error_rate = 0.0;
    double empirical_coverage = 0.0;  // 1 - empirical_error_rate
    double average_set_size = 0.0;
    std::size_t calibration_size = 0;
    std::size_t test_size = 0;

    friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct SweepOptions {
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

struct SweepResult {
    std::vector<double> axis;
    std::vector<double> mean_error;
    std::vector<double> std_error;  // population std over trials
    std::vector<double> mean_coverage;
    std::vector<double> std_coverage;
    std::vector<double> mean_set_size;
    std::vector<std::size_t> calibration_size;
    std::vector<std::size_t> test_size;
    std::size_t trials = 0;
    /// per_trial[point][trial]; empty when read back from CSV.
    std::vector<std::vector<TrialResult>> per_trial;
};

/// round-half-up(ratio * n), clamped to [1, n - 1].
/// Throws ValidationError when ratio is outside (0, 1) or n < 2.
std::size_t calibration_count(std::size_t n, double ratio);

struct Partition {
    std::vector<std::size_t> calibration;
    std::vector<std::size_t> test;
};

/// Uniform partition of 0..n-1. Consumes the stream identically for every
/// ratio, so partitions drawn from equal streams are nested across ratios.
Partition split_indices(std::size_t n, double ratio, std::mt19937_64& rng);

std::pair<Dataset, Dataset> split(const Dataset& data, double ratio, std::mt19937_64& rng);

/// Calibrate on part.calibration, predict part.test, record by record through
/// the conformal primitives. The sweep engine is checked against this.
TrialResult evaluate_partition(const Dataset& data, const Partition& part, RiskLevel level);

/// split_indices followed by evaluate_partition.
TrialResult run_trial(const Dataset& data, double ratio, RiskLevel level, std::mt19937_64& rng);

/// Fraction of questions whose truth is missing from its set.
double empirical_error_rate(std::span<const PredictionSet> sets, std::span<const std::size_t> truths);

double average_set_size(std::span<const PredictionSet> sets);

SweepResult sweep_alpha(const Dataset& data, double ratio, std::span<const double> alphas,
                        const SweepOptions& options);

SweepResult sweep_split(const Dataset& data, std::span<const double> ratios, RiskLevel level,
                        const SweepOptions& options);

}  // namespace scp

#pragma once
// Split conformal predictor over multiple-choice answer distributions.
//
// Scores are S(x, y) = 1 - f(y | x). The threshold is the k-th smallest
// calibration score with k = ceil((1 - alpha)(n + 1)); when k > n no finite
// score is large enough and every option is admitted.

#include <cstddef>
#include <span>
#include <vector>

namespace scp {

/// Tolerated miscoverage probability, strictly inside (0, 1).
class RiskLevel {
public:
    explicit RiskLevel(double alpha);
    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Normalized answer frequencies over K >= 2 options.
class ClassDistribution {
public:
    explicit ClassDistribution(std::vector<double> probs);

    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }

private:
    std::vector<double> probs_;
};

/// Per-option nonconformity scores, each in [0, 1].
using ScoreVector = std::vector<double>;

/// Scores of the calibration examples at their ground-truth option.
class CalibrationScores {
public:
    explicit CalibrationScores(std::vector<double> scores);

    std::span<const double> scores() const noexcept { return scores_; }
    std::size_t size() const noexcept { return scores_.size(); }

private:
    std::vector<double> scores_;
};

class Threshold {
public:
    static Threshold include_all() noexcept { return Threshold(true, 1.0); }
    static Threshold at(double tau);

    bool is_include_all() const noexcept { return include_all_; }
    /// Finite threshold value. Throws std::logic_error on the include-all sentinel.
    double tau() const;

    /// Orders thresholds with the sentinel above every finite value.
    friend bool operator==(const Threshold&, const Threshold&) = default;
    friend bool operator<(const Threshold& a, const Threshold& b) noexcept {
        if (a.include_all_) return false;
        if (b.include_all_) return true;
        return a.tau_ < b.tau_;
    }

private:
    Threshold(bool include_all, double tau) noexcept : include_all_(include_all), tau_(tau) {}

    bool include_all_;
    double tau_;
};

/// Option indices admitted for one question, ascending.
class PredictionSet {
public:
    PredictionSet() = default;
    explicit PredictionSet(std::vector<std::size_t> members);

    static PredictionSet full(std::size_t num_options);

    std::span<const std::size_t> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(std::size_t option) const noexcept;

    friend bool operator==(const PredictionSet&, const PredictionSet&) = default;

private:
    std::vector<std::size_t> members_;
};

ScoreVector nonconformity_scores(const ClassDistribution& dist);

/// 1 - f(truth | x). Throws std::out_of_range when truth_index >= K.
double calibration_score(const ClassDistribution& dist, std::size_t truth_index);

/// k = ceil((1 - alpha)(n + 1)), the 1-based rank of the threshold score.
/// A 1e-9 guard absorbs representation error in alpha, so alpha = 0.7 with
/// n = 9 gives k = 3 rather than 4.
std::size_t conformal_rank(std::size_t n, RiskLevel level) noexcept;

Threshold conformal_threshold(const CalibrationScores& cal, RiskLevel level);

/// Same rule on scores already sorted ascending; used by the sweep engine,
/// which sorts once per trial and reads off every alpha.
Threshold threshold_from_sorted(std::span<const double> sorted_scores, RiskLevel level);

PredictionSet prediction_set(const ClassDistribution& dist, const Threshold& threshold);

/// 1 - alpha + 1 / (n + 1).
double romano_upper_bound(std::size_t n, RiskLevel level);

}  // namespace scp

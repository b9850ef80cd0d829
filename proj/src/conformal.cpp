#include "scp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scp/error.hpp"
#include "scp/kernels.hpp"

namespace scp {

namespace {

constexpr double kSumTolerance = 1e-9;

bool in_unit_interval(double v) noexcept { return v >= 0.0 && v <= 1.0; }

}  // namespace

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

ClassDistribution::ClassDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) throw ValidationError("class distribution needs at least 2 options");
    double sum = 0.0;
    for (double p : probs_) {
        if (!in_unit_interval(p)) throw ValidationError("class probability outside [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ValidationError("class probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

CalibrationScores::CalibrationScores(std::vector<double> scores) : scores_(std::move(scores)) {
    if (scores_.empty()) throw ValidationError("empty calibration set");
    for (double s : scores_) {
        if (!in_unit_interval(s)) throw ValidationError("calibration score outside [0, 1]");
    }
}

Threshold Threshold::at(double tau) {
    if (!in_unit_interval(tau)) throw ValidationError("threshold outside [0, 1]");
    return Threshold(false, tau);
}

double Threshold::tau() const {
    if (include_all_) throw std::logic_error("include-all threshold has no finite value");
    return tau_;
}

PredictionSet::PredictionSet(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

PredictionSet PredictionSet::full(std::size_t num_options) {
    std::vector<std::size_t> all(num_options);
    for (std::size_t i = 0; i < num_options; ++i) all[i] = i;
    return PredictionSet(std::move(all));
}

bool PredictionSet::contains(std::size_t option) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), option);
}

ScoreVector nonconformity_scores(const ClassDistribution& dist) {
    ScoreVector scores(dist.size());
    kernels::active().complement(dist.probs(), scores);
    return scores;
}

double calibration_score(const ClassDistribution& dist, std::size_t truth_index) {
    if (truth_index >= dist.size()) {
        throw std::out_of_range("truth index " + std::to_string(truth_index) + " outside " +
                                std::to_string(dist.size()) + " options");
    }
    return 1.0 - dist[truth_index];
}

std::size_t conformal_rank(std::size_t n, RiskLevel level) noexcept {
    const double target = (1.0 - level.alpha()) * static_cast<double>(n + 1);
    return static_cast<std::size_t>(std::ceil(target - 1e-9));
}

Threshold threshold_from_sorted(std::span<const double> sorted_scores, RiskLevel level) {
    if (sorted_scores.empty()) throw ValidationError("empty calibration set");
    const std::size_t k = conformal_rank(sorted_scores.size(), level);
    if (k > sorted_scores.size()) return Threshold::include_all();
    // k >= 1 because alpha < 1 keeps the target above zero.
    return Threshold::at(sorted_scores[std::max<std::size_t>(k, 1) - 1]);
}

Threshold conformal_threshold(const CalibrationScores& cal, RiskLevel level) {
    const std::size_t n = cal.size();
    const std::size_t k = conformal_rank(n, level);
    if (k > n) return Threshold::include_all();
    std::vector<double> work(cal.scores().begin(), cal.scores().end());
    const auto kth = work.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(k, 1) - 1);
    std::nth_element(work.begin(), kth, work.end());
    return Threshold::at(*kth);
}

PredictionSet prediction_set(const ClassDistribution& dist, const Threshold& threshold) {
    if (threshold.is_include_all()) return PredictionSet::full(dist.size());
    const double tau = threshold.tau();
    const ScoreVector scores = nonconformity_scores(dist);
    std::vector<std::size_t> members;
    members.reserve(scores.size());
    for (std::size_t y = 0; y < scores.size(); ++y) {
        if (scores[y] <= tau) members.push_back(y);
    }
    return PredictionSet(std::move(members));
}

double romano_upper_bound(std::size_t n, RiskLevel level) {
    if (n == 0) throw ValidationError("romano bound needs a calibration size of at least 1");
    return 1.0 - level.alpha() + 1.0 / static_cast<double>(n + 1);
}

}  // namespace scp

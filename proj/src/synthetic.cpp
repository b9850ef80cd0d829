#include "scp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "scp/error.hpp"
#include "scp/rng.hpp"

namespace scp {

namespace {

std::string option_label(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('A' + i));
    return "O" + std::to_string(i + 1);
}

std::string record_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "q%06zu", i);
    return buf;
}

struct Latent {
    std::vector<double> probs;
    std::size_t truth;
};

// Consumes the stream in a fixed order: truth, Dirichlet weights, mode
// placement. Callers may keep drawing from `rng` afterwards.
Latent draw_latent(const GeneratorConfig& cfg, std::mt19937_64& rng) {
    const std::size_t k = cfg.num_options;
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    Latent out{std::vector<double>(k), pick(rng)};

    std::gamma_distribution<double> gamma(1.0 / cfg.concentration, 1.0);
    double sum = 0.0;
    for (double& w : out.probs) {
        w = gamma(rng);
        sum += w;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        // Very sharp Dirichlet: every weight underflowed, the limit is a vertex.
        std::fill(out.probs.begin(), out.probs.end(), 0.0);
        out.probs[pick(rng)] = 1.0;
    } else {
        for (double& w : out.probs) w /= sum;
    }

    const auto mode = static_cast<std::size_t>(
        std::max_element(out.probs.begin(), out.probs.end()) - out.probs.begin());
    std::bernoulli_distribution correct(cfg.accuracy);
    std::size_t target = out.truth;
    if (!correct(rng)) {
        std::uniform_int_distribution<std::size_t> wrong(0, k - 2);
        target = wrong(rng);
        if (target >= out.truth) ++target;
    }
    std::swap(out.probs[mode], out.probs[target]);
    return out;
}

}  // namespace

void GeneratorConfig::validate() const {
    if (num_records < 1) throw ValidationError("generator: num_records must be at least 1");
    if (num_options < 2) throw ValidationError("generator: num_options must be at least 2");
    if (sampling_count < 1) throw ValidationError("generator: sampling_count must be at least 1");
    if (!(concentration > 0.0) || !std::isfinite(concentration)) {
        throw ValidationError("generator: concentration must be a positive finite number");
    }
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
        throw ValidationError("generator: accuracy must lie in [0, 1]");
    }
}

Dataset generate_dataset(const GeneratorConfig& config) {
    config.validate();
    std::vector<std::string> labels(config.num_options);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = option_label(i);

    std::vector<QuestionRecord> records;
    records.reserve(config.num_records);
    for (std::size_t i = 0; i < config.num_records; ++i) {
        auto rng = make_stream(config.seed, i);
        Latent latent = draw_latent(config, rng);

        QuestionRecord rec;
        rec.id = record_id(i);
        rec.options = labels;
        rec.counts.assign(config.num_options, 0);
        rec.truth_index = latent.truth;
        std::discrete_distribution<std::size_t> answer(latent.probs.begin(), latent.probs.end());
        for (std::uint32_t s = 0; s < config.sampling_count; ++s) ++rec.counts[answer(rng)];
        records.push_back(std::move(rec));
    }
    return Dataset(std::move(records), config.sampling_count);
}

ContinuousExample draw_continuous_example(const GeneratorConfig& config, std::mt19937_64& rng) {
    Latent latent = draw_latent(config, rng);
    return {ClassDistribution(std::move(latent.probs)), latent.truth};
}

ContinuousExample draw_continuous_example(const GeneratorConfig& config, std::uint64_t record_index) {
    auto rng = make_stream(config.seed, record_index);
    return draw_continuous_example(config, rng);
}

std::vector<ContinuousExample> generate_continuous(const GeneratorConfig& config) {
    config.validate();
    std::vector<ContinuousExample> out;
    out.reserve(config.num_records);
    for (std::size_t i = 0; i < config.num_records; ++i) {
        out.push_back(draw_continuous_example(config, i));
    }
    return out;
}

double expected_coverage(std::size_t n, RiskLevel level) noexcept {
    const std::size_t k = conformal_rank(n, level);
    return std::min(1.0, static_cast<double>(k) / static_cast<double>(n + 1));
}

double coverage_oracle(const CalibrationScores& cal_scores, RiskLevel level) {
    std::vector<double> sorted(cal_scores.scores().begin(), cal_scores.scores().end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("oracle requires tie-free scores");
    }
    return expected_coverage(sorted.size(), level);
}

}  // namespace scp

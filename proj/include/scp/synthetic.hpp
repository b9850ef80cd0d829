#pragma once
// Exchangeable synthetic question sets with a tunable model quality.
//
// Each question gets a latent answer distribution drawn from a symmetric
// Dirichlet with parameter 1 / concentration. Its mode is moved onto the
// ground truth with probability `accuracy`, otherwise onto a uniformly chosen
// wrong option. Counts are P multinomial draws from the latent distribution.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "scp/answer_distribution.hpp"
#include "scp/conformal.hpp"

namespace scp {

struct GeneratorConfig {
    std::size_t num_records = 1000;
    std::size_t num_options = 4;
    std::uint32_t sampling_count = kDefaultSamplingCount;
    double concentration = 1.0;
    double accuracy = 0.7;
    std::uint64_t seed = 0;

    /// Throws ValidationError on any out-of-range field.
    void validate() const;
};

/// Record ids are "q000000", "q000001", ...; option labels "A", "B", ...
Dataset generate_dataset(const GeneratorConfig& config);

/// A question in the tie-free mode: the latent distribution is used directly
/// as f(.|x), so scores are continuous and ties have probability zero.
struct ContinuousExample {
    ClassDistribution dist;
    std::size_t truth_index;
};

std::vector<ContinuousExample> generate_continuous(const GeneratorConfig& config);

/// Same draw as generate_continuous for one record index; lets Monte Carlo
/// loops stream examples without materializing a dataset.
ContinuousExample draw_continuous_example(const GeneratorConfig& config, std::uint64_t record_index);

/// Next example from a caller-owned stream; config must already be valid.
ContinuousExample draw_continuous_example(const GeneratorConfig& config, std::mt19937_64& rng);

/// Exact marginal coverage of the split conformal set for exchangeable,
/// tie-free scores: min(1, ceil((1 - alpha)(n + 1)) / (n + 1)).
/// Throws ValidationError("oracle requires tie-free scores") on duplicates.
double coverage_oracle(const CalibrationScores& cal_scores, RiskLevel level);

/// The oracle's value as a function of n alone.
double expected_coverage(std::size_t n, RiskLevel level) noexcept;

}  // namespace scp

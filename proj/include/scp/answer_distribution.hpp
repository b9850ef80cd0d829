#pragma once
// Questions as sampled-answer counts, and their conversion to frequencies.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scp/conformal.hpp"

namespace scp {

inline constexpr std::uint32_t kDefaultSamplingCount = 36;

/// One question: P sampled answers already mapped onto K options.
struct QuestionRecord {
    std::string id;
    std::vector<std::string> options;
    std::vector<std::int32_t> counts;
    std::size_t truth_index = 0;
    std::optional<std::string> group;

    std::size_t num_options() const noexcept { return options.size(); }
    std::int64_t total_count() const noexcept;
};

/// Throws ValidationError naming the record id and the violated rule.
/// When sampling_count is given the counts must sum to it.
void validate_record(const QuestionRecord& record, std::optional<std::uint32_t> sampling_count = {});

/// Records sharing one sampling count P, with unique ids. May be empty
/// (e.g. after filtering); loaders reject empty input separately.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<QuestionRecord> records, std::uint32_t sampling_count);

    const std::vector<QuestionRecord>& records() const noexcept { return records_; }
    std::uint32_t sampling_count() const noexcept { return sampling_count_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const QuestionRecord& operator[](std::size_t i) const noexcept { return records_[i]; }

    /// Largest option count over all records (0 when empty).
    std::size_t max_options() const noexcept;

private:
    std::vector<QuestionRecord> records_;
    std::uint32_t sampling_count_ = kDefaultSamplingCount;
};

/// probs[y] = counts[y] / P.
ClassDistribution frequency_distribution(const QuestionRecord& record);

struct FilterResult {
    Dataset data;
    std::size_t discarded = 0;
};

/// Drops questions whose sampled answers never hit the ground truth.
FilterResult filter_unanswerable(const Dataset& data);

}  // namespace scp

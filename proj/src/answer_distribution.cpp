#include "scp/answer_distribution.hpp"

#include <numeric>
#include <unordered_set>

#include "scp/error.hpp"
#include "scp/kernels.hpp"

namespace scp {

namespace {

[[noreturn]] void reject(const QuestionRecord& record, const std::string& rule) {
    throw ValidationError("record '" + record.id + "': " + rule);
}

}  // namespace

std::int64_t QuestionRecord::total_count() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

void validate_record(const QuestionRecord& record, std::optional<std::uint32_t> sampling_count) {
    if (record.id.empty()) throw ValidationError("record with empty id");
    if (record.options.size() < 2) reject(record, "needs at least 2 options");
    if (record.counts.size() != record.options.size()) {
        reject(record, "counts length " + std::to_string(record.counts.size()) + " ≠ options length " +
                           std::to_string(record.options.size()));
    }
    for (std::int32_t c : record.counts) {
        if (c < 0) reject(record, "negative count");
    }
    if (record.truth_index >= record.options.size()) {
        reject(record, "truth index " + std::to_string(record.truth_index) + " out of range");
    }
    const std::int64_t total = record.total_count();
    if (total < 1) reject(record, "counts sum to 0 (P must be at least 1)");
    if (sampling_count && total != static_cast<std::int64_t>(*sampling_count)) {
        reject(record, "counts sum ≠ P (got " + std::to_string(total) + ", expected " +
                           std::to_string(*sampling_count) + ")");
    }
}

Dataset::Dataset(std::vector<QuestionRecord> records, std::uint32_t sampling_count)
    : records_(std::move(records)), sampling_count_(sampling_count) {
    if (sampling_count_ == 0) throw ValidationError("sampling count P must be at least 1");
    std::unordered_set<std::string> seen;
    seen.reserve(records_.size());
    for (const auto& r : records_) {
        validate_record(r, sampling_count_);
        if (!seen.insert(r.id).second) reject(r, "duplicate id");
    }
}

std::size_t Dataset::max_options() const noexcept {
    std::size_t k = 0;
    for (const auto& r : records_) k = std::max(k, r.num_options());
    return k;
}

ClassDistribution frequency_distribution(const QuestionRecord& record) {
    const std::int64_t total = record.total_count();
    if (total <= 0) reject(record, "counts sum to 0 (P must be at least 1)");
    std::vector<double> probs(record.counts.size());
    kernels::active().frequencies(record.counts, static_cast<double>(total), probs);
    return ClassDistribution(std::move(probs));
}

FilterResult filter_unanswerable(const Dataset& data) {
    std::vector<QuestionRecord> kept;
    kept.reserve(data.size());
    for (const auto& r : data.records()) {
        if (r.counts[r.truth_index] > 0) kept.push_back(r);
    }
    const std::size_t discarded = data.size() - kept.size();
    return {Dataset(std::move(kept), data.sampling_count()), discarded};
}

}  // namespace scp

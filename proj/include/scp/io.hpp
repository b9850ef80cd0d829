#pragma once
// File formats.
//
//   dataset JSONL     {"id":"q1","options":["A","B"],"counts":[30,6],"truth":0,"group":"m"}
//                     ("group" optional; one record per LF-terminated line)
//   sweep CSV         axis,mean_error,std_error,mean_set_size  (6 decimals)
//   prediction JSONL  {"id":"q1","alpha":0.2,"tau":0.5,"set":[0]}
//                     ("tau" is the string "include_all" for the sentinel)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scp/answer_distribution.hpp"
#include "scp/conformal.hpp"
#include "scp/harness.hpp"

namespace scp::io {

/// Reads dataset JSONL. Malformed lines are reported with their 1-based line
/// number; invariant violations name the record id. P is taken from
/// `sampling_count` when given, else from the first record. Blank lines are
/// skipped. Throws ValidationError("no records") on an empty input.
Dataset parse_dataset(std::istream& in, std::optional<std::uint32_t> sampling_count = {});
Dataset load_dataset(const std::filesystem::path& path, std::optional<std::uint32_t> sampling_count = {});

std::string format_dataset(const Dataset& data);

std::string format_sweep_csv(const SweepResult& result);
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
/// Parses the four CSV columns; coverage, sizes and per-trial data stay empty.
SweepResult parse_sweep_csv(std::string_view text);
SweepResult read_sweep_csv(const std::filesystem::path& path);

struct PredictionRecord {
    std::string id;
    double alpha = 0.0;
    Threshold threshold = Threshold::include_all();
    PredictionSet set;

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

std::string format_predictions(const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> parse_predictions(std::istream& in);

/// "0.1:0.9:0.1" (both ends inclusive within 1e-12), "0.1,0.5,0.9" or "0.2".
/// Values are snapped to a 1e-12 grid so 0.1 + 2 * 0.1 reads back as 0.3.
std::vector<double> parse_value_list(std::string_view spec);

enum class ReportMetric { error, std_error, set_size };

/// Table-style grid: one row per labelled sweep, one column per axis value
/// (union over sweeps, "-" where a sweep lacks the point), 4 decimals, and an
/// "Average" row when there is more than one sweep.
std::string render_report(const std::vector<std::pair<std::string, SweepResult>>& sweeps,
                          ReportMetric metric);

/// Writes via a sibling temporary file and a rename, so a failed run never
/// leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace scp::io

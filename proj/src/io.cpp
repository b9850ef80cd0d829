#include "scp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "scp/error.hpp"

namespace scp::io {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kCsvHeader = "axis,mean_error,std_error,mean_set_size";

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
    throw ValidationError("line " + std::to_string(line_no) + ": " + what);
}

QuestionRecord record_from_json(const nlohmann::json& j, std::size_t line_no) {
    if (!j.is_object()) line_error(line_no, "expected a JSON object");
    auto field = [&](const char* key) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end()) line_error(line_no, std::string("missing field '") + key + "'");
        return *it;
    };

    QuestionRecord rec;
    const auto& id = field("id");
    if (!id.is_string()) line_error(line_no, "'id' must be a string");
    rec.id = id.get<std::string>();

    const auto& options = field("options");
    if (!options.is_array()) line_error(line_no, "'options' must be an array of strings");
    for (const auto& o : options) {
        if (!o.is_string()) line_error(line_no, "'options' must be an array of strings");
        rec.options.push_back(o.get<std::string>());
    }

    const auto& counts = field("counts");
    if (!counts.is_array()) line_error(line_no, "'counts' must be an array of integers");
    for (const auto& c : counts) {
        if (!c.is_number_integer()) line_error(line_no, "'counts' must be an array of integers");
        const auto v = c.get<std::int64_t>();
        if (v < 0 || v > INT32_MAX) line_error(line_no, "record '" + rec.id + "': count out of range");
        rec.counts.push_back(static_cast<std::int32_t>(v));
    }

    const auto& truth = field("truth");
    if (!truth.is_number_integer()) line_error(line_no, "'truth' must be an integer");
    const auto t = truth.get<std::int64_t>();
    if (t < 0) line_error(line_no, "record '" + rec.id + "': truth index out of range");
    rec.truth_index = static_cast<std::size_t>(t);

    if (auto it = j.find("group"); it != j.end()) {
        if (!it->is_string()) line_error(line_no, "'group' must be a string");
        rec.group = it->get<std::string>();
    }
    return rec;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// 0.100000 -> 0.1, 2.000000 -> 2.0
std::string compact(double v) {
    std::string s = fixed6(v);
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

double parse_number(std::string_view text, std::string_view what) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ValidationError("invalid number for " + std::string(what) + ": '" + s + "'");
    }
    return v;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double snap(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

Dataset parse_dataset(std::istream& in, std::optional<std::uint32_t> sampling_count) {
    std::vector<QuestionRecord> records;
    std::optional<std::uint32_t> p = sampling_count;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            line_error(line_no, std::string("malformed JSON: ") + e.what());
        }
        QuestionRecord rec = record_from_json(j, line_no);
        try {
            validate_record(rec, p);
        } catch (const ValidationError& e) {
            line_error(line_no, e.what());
        }
        if (!p) p = static_cast<std::uint32_t>(rec.total_count());
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw ValidationError("no records");
    return Dataset(std::move(records), *p);
}

Dataset load_dataset(const std::filesystem::path& path, std::optional<std::uint32_t> sampling_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open dataset '" + path.string() + "'");
    return parse_dataset(in, sampling_count);
}

std::string format_dataset(const Dataset& data) {
    std::string out;
    for (const auto& rec : data.records()) {
        ordered_json j;
        j["id"] = rec.id;
        j["options"] = rec.options;
        j["counts"] = rec.counts;
        j["truth"] = rec.truth_index;
        if (rec.group) j["group"] = *rec.group;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string format_sweep_csv(const SweepResult& result) {
    std::string out(kCsvHeader);
    out += '\n';
    for (std::size_t i = 0; i < result.axis.size(); ++i) {
        out += fixed6(result.axis[i]) + ',' + fixed6(result.mean_error[i]) + ',' + fixed6(result.std_error[i]) +
               ',' + fixed6(result.mean_set_size[i]) + '\n';
    }
    return out;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
    write_file_atomic(path, format_sweep_csv(result));
}

SweepResult parse_sweep_csv(std::string_view text) {
    auto lines = split_on(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != kCsvHeader) {
        throw ValidationError("sweep CSV must start with header '" + std::string(kCsvHeader) + "'");
    }
    SweepResult r;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_on(lines[i], ',');
        if (cells.size() != 4) {
            throw ValidationError("sweep CSV line " + std::to_string(i + 1) + ": expected 4 columns");
        }
        r.axis.push_back(parse_number(cells[0], "axis"));
        r.mean_error.push_back(parse_number(cells[1], "mean_error"));
        r.std_error.push_back(parse_number(cells[2], "std_error"));
        r.mean_set_size.push_back(parse_number(cells[3], "mean_set_size"));
    }
    return r;
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open sweep CSV '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sweep_csv(buf.str());
}

std::string format_predictions(const std::vector<PredictionRecord>& records) {
    std::string out;
    for (const auto& p : records) {
        ordered_json j;
        j["id"] = p.id;
        j["alpha"] = p.alpha;
        if (p.threshold.is_include_all()) {
            j["tau"] = "include_all";
        } else {
            j["tau"] = p.threshold.tau();
        }
        j["set"] = std::vector<std::size_t>(p.set.members().begin(), p.set.members().end());
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<PredictionRecord> parse_predictions(std::istream& in) {
    std::vector<PredictionRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            PredictionRecord p;
            p.id = j.at("id").get<std::string>();
            p.alpha = j.at("alpha").get<double>();
            const auto& tau = j.at("tau");
            if (tau.is_string()) {
                if (tau.get<std::string>() != "include_all") line_error(line_no, "unknown tau sentinel");
                p.threshold = Threshold::include_all();
            } else {
                p.threshold = Threshold::at(tau.get<double>());
            }
            p.set = PredictionSet(j.at("set").get<std::vector<std::size_t>>());
            out.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            line_error(line_no, std::string("malformed prediction: ") + e.what());
        }
    }
    return out;
}

std::vector<double> parse_value_list(std::string_view spec) {
    if (spec.empty()) throw ValidationError("empty value list");
    std::vector<double> values;
    if (spec.find(':') != std::string_view::npos) {
        const auto parts = split_on(spec, ':');
        if (parts.size() != 3) throw ValidationError("range must be start:stop:step");
        const double start = parse_number(parts[0], "range start");
        const double stop = parse_number(parts[1], "range stop");
        const double step = parse_number(parts[2], "range step");
        if (!(step > 0.0)) throw ValidationError("range step must be positive");
        if (start > stop + 1e-12) throw ValidationError("range start exceeds stop");
        for (std::size_t i = 0;; ++i) {
            const double v = start + static_cast<double>(i) * step;
            if (v > stop + 1e-12) break;
            if (i >= 1000000) throw ValidationError("range has too many points");
            values.push_back(snap(v));
        }
    } else {
        for (auto part : split_on(spec, ',')) values.push_back(snap(parse_number(part, "value")));
    }
    return values;
}

std::string render_report(const std::vector<std::pair<std::string, SweepResult>>& sweeps,
                          ReportMetric metric) {
    if (sweeps.empty()) throw ValidationError("report needs at least one sweep");
    std::vector<double> axis;
    for (const auto& [label, s] : sweeps) axis.insert(axis.end(), s.axis.begin(), s.axis.end());
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());

    auto value = [&](const SweepResult& s, std::size_t i) {
        switch (metric) {
            case ReportMetric::std_error: return s.std_error[i];
            case ReportMetric::set_size: return s.mean_set_size[i];
            case ReportMetric::error: break;
        }
        return s.mean_error[i];
    };

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"label"});
    for (double a : axis) rows.front().push_back(compact(a));
    std::vector<double> sums(axis.size(), 0.0);
    std::vector<std::size_t> hits(axis.size(), 0);
    for (const auto& [label, s] : sweeps) {
        std::vector<std::string> row{label};
        for (std::size_t c = 0; c < axis.size(); ++c) {
            const auto it = std::find(s.axis.begin(), s.axis.end(), axis[c]);
            if (it == s.axis.end()) {
                row.emplace_back("-");
                continue;
            }
            const double v = value(s, static_cast<std::size_t>(it - s.axis.begin()));
            sums[c] += v;
            ++hits[c];
            row.push_back(fixed4(v));
        }
        rows.push_back(std::move(row));
    }
    if (sweeps.size() > 1) {
        std::vector<std::string> row{"Average"};
        for (std::size_t c = 0; c < axis.size(); ++c) {
            row.push_back(hits[c] ? fixed4(sums[c] / static_cast<double>(hits[c])) : "-");
        }
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> width(axis.size() + 1, 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            const std::size_t pad = width[c] - row[c].size();
            if (c == 0) {
                line += row[c] + std::string(pad, ' ');
            } else {
                line += std::string(pad, ' ') + row[c];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

}  // namespace scp::io

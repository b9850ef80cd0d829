#include "scp/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "scp/answer_distribution.hpp"
#include "scp/conformal.hpp"
#include "scp/error.hpp"
#include "scp/harness.hpp"
#include "scp/io.hpp"
#include "scp/synthetic.hpp"

namespace scp::cli {

namespace {

struct DataFlags {
    std::string input;
    std::optional<std::uint32_t> p;
    bool no_filter = false;
    std::string group;
};

struct Options {
    DataFlags data;
    std::string calibration;
    std::string output;
    std::string alpha;
    std::string ratio;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    GeneratorConfig gen;
    std::vector<std::string> reports;
    std::string metric = "error";
};

void add_data_flags(CLI::App* cmd, DataFlags& d, const char* input_help) {
    cmd->add_option("--input", d.input, input_help)->required();
    cmd->add_option("--p", d.p, "Expected samplings per question (default: inferred from the first record)");
    cmd->add_flag("--no-filter", d.no_filter, "Keep questions whose samples never hit the ground truth");
    cmd->add_option("--group", d.group, "Only use records whose 'group' field equals this value");
}

Dataset load(const DataFlags& d, const std::string& path, std::ostream& err, bool filter) {
    Dataset data = io::load_dataset(path, d.p);
    if (!d.group.empty()) {
        std::vector<QuestionRecord> kept;
        for (const auto& r : data.records()) {
            if (r.group && *r.group == d.group) kept.push_back(r);
        }
        if (kept.empty()) throw ValidationError("no records in group '" + d.group + "'");
        data = Dataset(std::move(kept), data.sampling_count());
    }
    if (filter && !d.no_filter) {
        auto [kept, discarded] = filter_unanswerable(data);
        if (discarded > 0) err << "discarded " << discarded << " unanswerable record(s) from " << path << "\n";
        if (kept.empty()) throw ValidationError("every record in " + path + " was discarded as unanswerable");
        data = std::move(kept);
    }
    return data;
}

double single_value(const std::string& spec, const char* flag) {
    const auto values = io::parse_value_list(spec);
    if (values.size() != 1) throw UsageError(std::string(flag) + " takes a single value here");
    return values.front();
}

void emit(const std::string& output, const std::string& contents, std::ostream& out) {
    if (output.empty() || output == "-") {
        out << contents;
    } else {
        io::write_file_atomic(output, contents);
    }
}

std::string threshold_text(const Threshold& t) {
    if (t.is_include_all()) return "include_all";
    std::ostringstream s;
    s.precision(17);
    s << t.tau();
    return s.str();
}

int cmd_generate(const Options& o, std::ostream& out) {
    emit(o.output, io::format_dataset(generate_dataset(o.gen)), out);
    return kOk;
}

int cmd_calibrate(const Options& o, std::ostream& out, std::ostream& err) {
    const RiskLevel level(single_value(o.alpha, "--alpha"));
    const Dataset data = load(o.data, o.data.input, err, true);
    std::vector<double> scores;
    scores.reserve(data.size());
    for (const auto& r : data.records()) scores.push_back(calibration_score(frequency_distribution(r), r.truth_index));
    const Threshold t = conformal_threshold(CalibrationScores(std::move(scores)), level);
    out << "n=" << data.size() << " k=" << conformal_rank(data.size(), level) << " tau=" << threshold_text(t) << "\n";
    return kOk;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
    const double alpha = single_value(o.alpha, "--alpha");
    const RiskLevel level(alpha);
    const Dataset cal = load(o.data, o.calibration, err, true);
    const Dataset test = load(o.data, o.data.input, err, false);

    std::vector<double> scores;
    scores.reserve(cal.size());
    for (const auto& r : cal.records()) scores.push_back(calibration_score(frequency_distribution(r), r.truth_index));
    const Threshold t = conformal_threshold(CalibrationScores(std::move(scores)), level);

    std::vector<io::PredictionRecord> preds;
    preds.reserve(test.size());
    for (const auto& r : test.records()) {
        preds.push_back({r.id, alpha, t, prediction_set(frequency_distribution(r), t)});
    }
    emit(o.output, io::format_predictions(preds), out);
    return kOk;
}

SweepOptions sweep_options(const Options& o) {
    return SweepOptions{o.trials, o.seed, o.workers};
}

int cmd_sweep_alpha(const Options& o, std::ostream& out, std::ostream& err) {
    const double ratio = single_value(o.ratio.empty() ? "0.5" : o.ratio, "--ratio");
    const auto alphas = io::parse_value_list(o.alpha.empty() ? "0.1:0.9:0.1" : o.alpha);
    const Dataset data = load(o.data, o.data.input, err, true);
    emit(o.output, io::format_sweep_csv(sweep_alpha(data, ratio, alphas, sweep_options(o))), out);
    return kOk;
}

int cmd_sweep_split(const Options& o, std::ostream& out, std::ostream& err) {
    const RiskLevel level(single_value(o.alpha.empty() ? "0.2" : o.alpha, "--alpha"));
    const auto ratios = io::parse_value_list(o.ratio.empty() ? "0.1:0.9:0.1" : o.ratio);
    const Dataset data = load(o.data, o.data.input, err, true);
    emit(o.output, io::format_sweep_csv(sweep_split(data, ratios, level, sweep_options(o))), out);
    return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
    io::ReportMetric metric = io::ReportMetric::error;
    if (o.metric == "std") {
        metric = io::ReportMetric::std_error;
    } else if (o.metric == "size") {
        metric = io::ReportMetric::set_size;
    } else if (o.metric != "error") {
        throw UsageError("--metric must be one of error, std, size");
    }
    std::vector<std::pair<std::string, SweepResult>> sweeps;
    for (const auto& spec : o.reports) {
        std::string label;
        std::string path = spec;
        if (const auto eq = spec.find('='); eq != std::string::npos) {
            label = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            label = std::filesystem::path(path).stem().string();
        }
        sweeps.emplace_back(label, io::read_sweep_csv(path));
    }
    out << io::render_report(sweeps, metric);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Split conformal prediction for multiple-choice answer samples", "scp"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as JSONL");
    gen->add_option("--records", o.gen.num_records, "Number of questions")->check(CLI::PositiveNumber);
    gen->add_option("--options", o.gen.num_options, "Options per question")->check(CLI::Range(2, 1 << 20));
    gen->add_option("--p", o.gen.sampling_count, "Samplings per question")->check(CLI::PositiveNumber);
    gen->add_option("--concentration", o.gen.concentration, "Latent sharpness (higher = more confident)");
    gen->add_option("--accuracy", o.gen.accuracy, "Probability the latent mode is the ground truth");
    gen->add_option("--seed", o.gen.seed, "RNG seed");
    gen->add_option("--output", o.output, "Output path (default: stdout)");

    auto* cal = app.add_subcommand("calibrate", "Print the conformal threshold for a calibration set");
    add_data_flags(cal, o.data, "Calibration dataset (JSONL)");
    cal->add_option("--alpha", o.alpha, "Risk level")->required();

    auto* pred = app.add_subcommand("predict", "Emit prediction sets as JSONL");
    add_data_flags(pred, o.data, "Questions to predict (JSONL)");
    pred->add_option("--calibration", o.calibration, "Calibration dataset (JSONL)")->required();
    pred->add_option("--alpha", o.alpha, "Risk level")->required();
    pred->add_option("--output", o.output, "Output path (default: stdout)");

    auto add_sweep_flags = [&](CLI::App* cmd) {
        add_data_flags(cmd, o.data, "Dataset (JSONL)");
        cmd->add_option("--trials", o.trials, "Random splits per point")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", o.seed, "RNG seed");
        cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
        cmd->add_option("--output", o.output, "CSV path (default: stdout)");
    };
    auto* sa = app.add_subcommand("sweep-alpha", "Error rate and set size across risk levels");
    add_sweep_flags(sa);
    sa->add_option("--alpha", o.alpha, "Risk levels: start:stop:step or a,b,c (default 0.1:0.9:0.1)");
    sa->add_option("--ratio", o.ratio, "Calibration fraction (default 0.5)");

    auto* ss = app.add_subcommand("sweep-split", "Error rate and set size across split ratios");
    add_sweep_flags(ss);
    ss->add_option("--ratio", o.ratio, "Calibration fractions: start:stop:step or a,b,c (default 0.1:0.9:0.1)");
    ss->add_option("--alpha", o.alpha, "Risk level (default 0.2)");

    auto* rep = app.add_subcommand("report", "Render sweep CSVs as a grid");
    rep->add_option("--input", o.reports, "Sweep CSV, optionally as label=path; repeatable")->required();
    rep->add_option("--metric", o.metric, "error, std or size (default error)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(o, out);
        if (cal->parsed()) return cmd_calibrate(o, out, err);
        if (pred->parsed()) return cmd_predict(o, out, err);
        if (sa->parsed()) return cmd_sweep_alpha(o, out, err);
        if (ss->parsed()) return cmd_sweep_split(o, out, err);
        if (rep->parsed()) return cmd_report(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}

}  // namespace scp::cli

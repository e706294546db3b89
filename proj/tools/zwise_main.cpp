// zwise: batch Z-number wisdom assessment.
//
// Verbs:
//   calibrate  derive confidence thresholds from a corpus's pooled ratings
//   run        full pipeline: corpus -> Z-numbers + reports
//   stats      validity battery over an existing znumbers.csv + external scales
//   explain    per-rule firing strengths for one participant
//
// Exit codes: 0 success, 2 validation/config/input error, 3 calibration
// mismatch (valley count != taxonomy size).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zwise/attribute_b.hpp"
#include "zwise/config.hpp"
#include "zwise/corpus.hpp"
#include "zwise/csvio.hpp"
#include "zwise/errors.hpp"
#include "zwise/kde.hpp"
#include "zwise/pipeline.hpp"

namespace {

using namespace zwise;

// Flag values arrive as optionals so "not given" never clobbers config-file
// settings; every accepted flag is echoed into cfg.overrides like file keys.
struct CommonFlags {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::vector<std::string> lexicons;            // COMP=PATH
    std::optional<std::string> rules_path;
    std::vector<std::string> component_thresholds; // COMP=t1,...,t6
    std::optional<std::string> confidence_thresholds; // t1,...,t7
    std::optional<double> bandwidth;
    std::optional<std::size_t> grid_points;
    std::optional<double> dx;
    bool strict = false;
    std::optional<double> default_rule_strength;
    std::optional<std::size_t> resamples;
    std::optional<std::uint64_t> seed;
    std::optional<double> level;
    std::optional<std::string> p_mode;
    std::optional<std::size_t> expected_responses;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file supplying defaults");
    cmd->add_option("--out", f.out_dir, "output directory for report files");
    cmd->add_option("--lexicon", f.lexicons,
                    "lexicon file override, COMP=PATH (repeatable; COMP in PT,Ref,Pro,REA,IH)");
    cmd->add_option("--rules", f.rules_path, "rule base file (defaults to the built-in 21 rules)");
    cmd->add_option("--component-thresholds", f.component_thresholds,
                    "component threshold override, COMP=t1,t2,t3,t4,t5,t6 (repeatable)");
    cmd->add_option("--confidence-thresholds", f.confidence_thresholds,
                    "confidence taxonomy thresholds t1,...,t7");
    cmd->add_option("--bandwidth", f.bandwidth, "KDE bandwidth for confidence calibration");
    cmd->add_option("--grid-points", f.grid_points, "KDE grid points (>= 16)");
    cmd->add_option("--dx", f.dx, "output universe step (must divide 1)");
    cmd->add_flag("--strict", f.strict, "one-hot component vectors before inference");
    cmd->add_option("--default-rule-strength", f.default_rule_strength,
                    "firing strength of the default rule, in (0,1]");
    cmd->add_option("--resamples", f.resamples, "bootstrap resamples");
    cmd->add_option("--seed", f.seed, "bootstrap RNG seed");
    cmd->add_option("--level", f.level, "bootstrap CI level, in (0,1)");
    cmd->add_option("--p-mode", f.p_mode, "p-value mode: asymptotic|exact");
    cmd->add_option("--expected-responses", f.expected_responses,
                    "responses required per participant");
}

std::vector<double> parse_double_list(const std::string& text, std::size_t expected,
                                      const std::string& what) {
    std::vector<double> values;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(what + ": bad number \"" + item + "\"");
        }
    }
    if (values.size() != expected) {
        throw ConfigError(what + ": expected " + std::to_string(expected) + " numbers, got " +
                          std::to_string(values.size()));
    }
    return values;
}

std::pair<Component, std::string> split_component_arg(const std::string& arg,
                                                      const std::string& flag) {
    auto eq = arg.find('=');
    if (eq == std::string::npos) {
        throw ConfigError(flag + ": expected COMP=VALUE, got \"" + arg + "\"");
    }
    return {component_from_string(arg.substr(0, eq)), arg.substr(eq + 1)};
}

PipelineConfig build_config(const CommonFlags& f) {
    PipelineConfig cfg;
    if (!f.config_path.empty()) cfg = load_config(f.config_path);

    auto note = [&](const std::string& key, const std::string& value) {
        cfg.overrides.push_back(key + "=" + value);
    };

    for (const std::string& arg : f.lexicons) {
        auto [comp, path] = split_component_arg(arg, "--lexicon");
        cfg.lexicon_paths[static_cast<std::size_t>(comp)] = path;
        note(std::string("lexicons.") + std::string(to_string(comp)), path);
    }
    if (f.rules_path) {
        cfg.rules_path = *f.rules_path;
        note("rules", cfg.rules_path);
    }
    for (const std::string& arg : f.component_thresholds) {
        auto [comp, list] = split_component_arg(arg, "--component-thresholds");
        auto v = parse_double_list(list, 6, "--component-thresholds " + std::string(to_string(comp)));
        std::array<double, 6> t;
        std::copy(v.begin(), v.end(), t.begin());
        cfg.component_thresholds[static_cast<std::size_t>(comp)] = ComponentThresholds(comp, t);
        note(std::string("component_thresholds.") + std::string(to_string(comp)), list);
    }
    if (f.confidence_thresholds) {
        auto v = parse_double_list(*f.confidence_thresholds, 7, "--confidence-thresholds");
        std::array<double, 7> t;
        std::copy(v.begin(), v.end(), t.begin());
        cfg.confidence_thresholds = ConfidenceThresholds::from_inner(t);
        note("confidence_thresholds", *f.confidence_thresholds);
    }
    if (f.bandwidth) {
        cfg.kde_bandwidth = *f.bandwidth;
        note("kde.bandwidth", format_double(cfg.kde_bandwidth));
    }
    if (f.grid_points) {
        cfg.kde_grid_points = *f.grid_points;
        note("kde.grid_points", std::to_string(cfg.kde_grid_points));
    }
    if (f.dx) {
        cfg.dx = *f.dx;
        note("fis.dx", format_double(cfg.dx));
    }
    if (f.strict) {
        cfg.strict_mode = true;
        note("fis.strict", "true");
    }
    if (f.default_rule_strength) {
        cfg.default_rule_strength = *f.default_rule_strength;
        note("fis.default_rule_strength", format_double(cfg.default_rule_strength));
    }
    if (f.resamples) {
        cfg.stats.resamples = *f.resamples;
        note("stats.resamples", std::to_string(cfg.stats.resamples));
    }
    if (f.seed) {
        cfg.stats.seed = *f.seed;
        note("stats.seed", std::to_string(cfg.stats.seed));
    }
    if (f.level) {
        cfg.stats.level = *f.level;
        note("stats.level", format_double(cfg.stats.level));
    }
    if (f.p_mode) {
        if (*f.p_mode == "asymptotic") cfg.stats.p_mode = PValueMode::Asymptotic;
        else if (*f.p_mode == "exact") cfg.stats.p_mode = PValueMode::Exact;
        else throw ConfigError("--p-mode must be asymptotic|exact");
        note("stats.p_mode", *f.p_mode);
    }
    if (f.expected_responses) {
        cfg.expected_responses = *f.expected_responses;
        note("expected_responses", std::to_string(cfg.expected_responses));
    }
    if (f.out_dir) {
        cfg.output_dir = *f.out_dir;
        note("output_dir", cfg.output_dir);
    }
    cfg.validate();
    return cfg;
}

std::vector<double> pooled_normalized_ratings(const std::vector<ParticipantRecord>& corpus) {
    std::vector<const ParticipantRecord*> sorted;
    sorted.reserve(corpus.size());
    for (const auto& rec : corpus) sorted.push_back(&rec);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        return a->participant_id < b->participant_id;
    });
    std::vector<double> pooled;
    for (const auto* rec : sorted) {
        for (const auto& resp : rec->responses) pooled.push_back(normalize_rating(resp.confidence));
    }
    return pooled;
}

int cmd_calibrate(const CommonFlags& flags, const std::string& corpus_path) {
    PipelineConfig cfg = build_config(flags);
    auto corpus = ingest_corpus(corpus_path, cfg.expected_responses);
    std::vector<double> pooled = pooled_normalized_ratings(corpus);

    ConfidenceCalibration cal =
        calibrate_confidence_thresholds(pooled, cfg.kde_bandwidth, cfg.kde_grid_points);

    std::filesystem::create_directories(cfg.output_dir);
    {
        std::ofstream out(cfg.output_dir + "/confidence_thresholds.json", std::ios::binary);
        if (!out) throw InputError("cannot write " + cfg.output_dir + "/confidence_thresholds.json");
        // Emitted as a config fragment so the file feeds straight into --config.
        out << "{\n  \"confidence_thresholds\": [";
        auto inner = cal.thresholds.inner();
        for (std::size_t i = 0; i < inner.size(); ++i) {
            out << (i ? ", " : "") << format_double(inner[i]);
        }
        out << "]\n}\n";
    }
    {
        std::ofstream out(cfg.output_dir + "/kde_confidence.csv", std::ios::binary);
        if (!out) throw InputError("cannot write " + cfg.output_dir + "/kde_confidence.csv");
        out << "# confidence density over pooled normalized ratings (bandwidth "
            << format_double(cfg.kde_bandwidth) << ")\n";
        write_csv(cal.curve, out);
    }

    std::cout << "calibrated confidence thresholds (n=" << pooled.size() << "):";
    for (double t : cal.thresholds.inner()) std::cout << " " << format_double(t);
    std::cout << "\nwrote " << cfg.output_dir << "/confidence_thresholds.json\n";
    std::cout << "wrote " << cfg.output_dir << "/kde_confidence.csv\n";
    return 0;
}

int cmd_run(const CommonFlags& flags, const std::string& corpus_path,
            const std::string& scales_path) {
    PipelineConfig cfg = build_config(flags);
    Pipeline pipeline(cfg);
    auto corpus = ingest_corpus(corpus_path, cfg.expected_responses);
    auto results = pipeline.run(corpus);

    std::optional<ExternalScales> scales;
    if (!scales_path.empty()) scales = read_external_scales(scales_path);

    auto written = emit_reports(results, pipeline, scales ? &*scales : nullptr, std::cerr);
    std::cout << "processed " << results.size() << " participants\n";
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_stats(const CommonFlags& flags, const std::string& znumbers_path,
              const std::string& scales_path) {
    PipelineConfig cfg = build_config(flags);
    std::ifstream in(znumbers_path);
    if (!in) throw InputError("cannot open " + znumbers_path);
    std::vector<ZRow> rows = read_znumbers_csv(in, znumbers_path);
    if (rows.empty()) throw InputError(znumbers_path + ": no result rows");
    ExternalScales scales = read_external_scales(scales_path);
    if (scales.measures.empty() || scales.by_participant.empty()) {
        std::cerr << "notice: external scales empty; stats report skipped\n";
        return 0;
    }

    StatsBundle bundle = run_stats_battery(rows, scales, cfg.stats);
    for (const auto& n : bundle.notices) std::cerr << "notice: " << n << "\n";

    std::filesystem::create_directories(cfg.output_dir);
    {
        std::ofstream out(cfg.output_dir + "/stats_report.csv", std::ios::binary);
        if (!out) throw InputError("cannot write " + cfg.output_dir + "/stats_report.csv");
        write_stats_report_csv(out, bundle.correlations, cfg.overrides);
    }
    {
        std::ofstream out(cfg.output_dir + "/group_tests.csv", std::ios::binary);
        if (!out) throw InputError("cannot write " + cfg.output_dir + "/group_tests.csv");
        write_group_tests_csv(out, bundle.group_tests, cfg.overrides);
    }
    std::cout << "wrote " << cfg.output_dir << "/stats_report.csv\n";
    std::cout << "wrote " << cfg.output_dir << "/group_tests.csv\n";
    return 0;
}

int cmd_explain(const CommonFlags& flags, const std::string& corpus_path,
                const std::string& participant_id) {
    PipelineConfig cfg = build_config(flags);
    Pipeline pipeline(cfg);
    auto corpus = ingest_corpus(corpus_path, cfg.expected_responses);
    for (const auto& rec : corpus) {
        if (rec.participant_id == participant_id) {
            std::cout << explain_participant(pipeline.process(rec), pipeline);
            return 0;
        }
    }
    throw InputError("participant " + participant_id + " not found in " + corpus_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zwise: Z-number wisdom assessment over transcribed dilemma responses"};
    app.require_subcommand(1);

    CommonFlags calibrate_flags, run_flags, stats_flags, explain_flags;
    std::string corpus_path, scales_path, znumbers_path, participant_id;

    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "derive confidence thresholds from a corpus's pooled ratings");
    calibrate->add_option("--corpus", corpus_path, "corpus file (.jsonl/.ndjson/.csv)")->required();
    add_common_flags(calibrate, calibrate_flags);

    CLI::App* run = app.add_subcommand("run", "run the full pipeline and emit reports");
    run->add_option("--corpus", corpus_path, "corpus file (.jsonl/.ndjson/.csv)")->required();
    run->add_option("--scales", scales_path,
                    "external scale scores CSV (participant_id + one column per measure)");
    add_common_flags(run, run_flags);

    CLI::App* stats = app.add_subcommand(
        "stats", "run the validity battery over an existing znumbers.csv");
    stats->add_option("--znumbers", znumbers_path, "znumbers.csv from a previous run")->required();
    stats->add_option("--scales", scales_path, "external scale scores CSV")->required();
    add_common_flags(stats, stats_flags);

    CLI::App* explain = app.add_subcommand(
        "explain", "print per-rule firing strengths for one participant");
    explain->add_option("--corpus", corpus_path, "corpus file (.jsonl/.ndjson/.csv)")->required();
    explain->add_option("--participant", participant_id, "participant_id to explain")->required();
    add_common_flags(explain, explain_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (calibrate->parsed()) return cmd_calibrate(calibrate_flags, corpus_path);
        if (run->parsed()) return cmd_run(run_flags, corpus_path, scales_path);
        if (stats->parsed()) return cmd_stats(stats_flags, znumbers_path, scales_path);
        if (explain->parsed()) return cmd_explain(explain_flags, corpus_path, participant_id);
    } catch (const CalibrationMismatch& e) {
        std::cerr << "calibration mismatch: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

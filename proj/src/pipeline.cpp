#include "zwise/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string_view>
#include <thread>

#include "zwise/csvio.hpp"
#include "zwise/errors.hpp"
#include "zwise/kde.hpp"

namespace zwise {

namespace {

PipelineConfig validated(PipelineConfig cfg) {
    cfg.validate();
    return cfg;
}

std::array<Lexicon, kComponents.size()> load_lexicons(const PipelineConfig& cfg) {
    auto make = [&](std::size_t c) {
        Component comp = kComponents[c];
        return cfg.lexicon_paths[c].empty() ? Lexicon::builtin_seed(comp)
                                            : Lexicon::from_file(comp, cfg.lexicon_paths[c]);
    };
    return {make(0), make(1), make(2), make(3), make(4)};
}

RuleBase load_rules(const PipelineConfig& cfg) {
    return cfg.rules_path.empty() ? RuleBase::builtin_default()
                                  : RuleBase::from_file(cfg.rules_path);
}

void write_comment_header(std::ostream& out, std::string_view title,
                          const std::vector<std::string>& overrides) {
    out << "# " << title << "\n";
    if (overrides.empty()) {
        out << "# overrides: none\n";
    } else {
        for (const auto& o : overrides) out << "# override: " << o << "\n";
    }
}

std::ofstream open_report(const std::string& dir, const std::string& name,
                          std::vector<std::string>& written) {
    std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary); // LF line endings everywhere
    if (!out) throw InputError("cannot write report file: " + path);
    written.push_back(path);
    return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

ZRow row_of(const ParticipantResult& r) {
    ZRow row;
    row.participant_id = r.participant_id;
    row.a_score = r.z.a_score;
    row.a_label = r.z.a_label;
    row.b_score = r.z.b_score;
    row.b_label = r.z.b_label;
    if (r.demographics) {
        row.gender = r.demographics->gender;
        row.category = r.demographics->category;
    }
    return row;
}

} // namespace

Pipeline::Pipeline(PipelineConfig cfg)
    : cfg_(validated(std::move(cfg))),
      lexicons_(load_lexicons(cfg_)),
      rules_(load_rules(cfg_)),
      partition_(cfg_.dx) {}

ParticipantResult Pipeline::process(const ParticipantRecord& record) const {
    try {
        ParticipantResult out;
        out.participant_id = record.participant_id;
        out.demographics = record.demographics;
        out.raw_scores.reserve(record.responses.size());
        out.response_b.reserve(record.responses.size());

        for (const Response& resp : record.responses) {
            std::vector<std::string> tokens = tokenize(resp.transcript);
            if (tokens.empty()) {
                out.warnings.push_back("dilemma " + std::to_string(resp.dilemma_id) +
                                       ": empty transcript, all component scores 0");
            }
            std::array<double, 5> row{};
            for (std::size_t c = 0; c < kComponents.size(); ++c) {
                row[c] = component_score(count_markers(tokens, lexicons_[c]), tokens.size());
            }
            out.raw_scores.push_back(row);
            out.response_b.push_back(normalize_rating(resp.confidence));
        }

        out.components =
            compute_attribute_a(out.raw_scores, cfg_.component_thresholds, cfg_.expected_responses);

        ComponentDegrees inputs{};
        for (std::size_t c = 0; c < kComponents.size(); ++c) {
            const FuzzyVector& v = out.components[c].avg;
            inputs[c] = LevelDegrees{v.degree(0), v.degree(1), v.degree(2)};
            if (out.components[c].degenerate) {
                out.warnings.push_back(
                    std::string(to_string(kComponents[c])) +
                    ": averaged membership vector is all-zero; label is the tie-break");
            }
        }
        if (cfg_.strict_mode) inputs = one_hot_dominant(inputs);

        InferenceResult inf = infer(inputs, rules_, partition_, cfg_.default_rule_strength);
        double a = defuzzify_centroid(inf.grid, inf.aggregated);
        double b = participant_confidence(out.response_b);
        out.z = make_z_number(a, b, partition_, cfg_.confidence_thresholds);
        out.rule_alphas = std::move(inf.alphas);
        return out;
    } catch (const Error& e) {
        throw InputError("participant " + record.participant_id + ": " + e.what());
    }
}

std::vector<ParticipantResult> Pipeline::run(const std::vector<ParticipantRecord>& corpus) const {
    std::vector<ParticipantResult> out(corpus.size());

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::min<std::size_t>(hw ? hw : 1, corpus.size());
    if (corpus.size() < 16 || workers <= 1) {
        for (std::size_t i = 0; i < corpus.size(); ++i) out[i] = process(corpus[i]);
    } else {
        // Participants are independent; slot i is written only by the thread
        // that claimed i, so the scatter is deterministic regardless of
        // scheduling. The ordered reduction below canonicalizes file order.
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex err_mutex;
        std::exception_ptr first_error;
        auto work = [&] {
            while (!failed.load(std::memory_order_relaxed)) {
                std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= corpus.size()) break;
                try {
                    out[i] = process(corpus[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::sort(out.begin(), out.end(), [](const ParticipantResult& a, const ParticipantResult& b) {
        return a.participant_id < b.participant_id;
    });
    return out;
}

void write_znumbers_csv(std::ostream& out, const std::vector<ParticipantResult>& results,
                        const std::vector<std::string>& overrides) {
    write_comment_header(out, "per-participant Z-numbers <wisdom, confidence>", overrides);
    out << "participant_id,a_score,a_label,b_score,b_label";
    for (std::size_t c = 0; c < kComponents.size(); ++c) {
        std::string name{to_string(kComponents[c])};
        out << "," << name << "_label"
            << "," << name << "_low"
            << "," << name << "_mod"
            << "," << name << "_high";
    }
    out << ",age,gender,category,warnings\n";
    for (const ParticipantResult& r : results) {
        out << csv_escape(r.participant_id) << "," << format_double(r.z.a_score) << ","
            << r.z.a_label << "," << format_double(r.z.b_score) << "," << r.z.b_label;
        for (std::size_t c = 0; c < kComponents.size(); ++c) {
            const ComponentSummary& s = r.components[c];
            out << "," << s.label;
            for (std::size_t l = 0; l < 3; ++l) out << "," << format_double(s.avg.degree(l));
        }
        out << ",";
        if (r.demographics && r.demographics->age) out << *r.demographics->age;
        out << ",";
        if (r.demographics) out << csv_escape(r.demographics->gender);
        out << ",";
        if (r.demographics) out << csv_escape(r.demographics->category);
        out << "," << csv_escape(join(r.warnings, ';')) << "\n";
    }
}

std::vector<ZRow> read_znumbers_csv(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        header = parse_csv_line(line);
        break;
    }
    if (header.empty()) throw InputError(origin + ": missing header row");

    auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw InputError(origin + ": missing column " + name);
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t c_id = *column("participant_id", true);
    std::size_t c_a = *column("a_score", true);
    std::size_t c_al = *column("a_label", true);
    std::size_t c_b = *column("b_score", true);
    std::size_t c_bl = *column("b_label", true);
    auto c_gender = column("gender", false);
    auto c_category = column("category", false);

    std::vector<ZRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f = parse_csv_line(line);
        if (f.size() < header.size()) {
            throw InputError(origin + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
        }
        ZRow row;
        row.participant_id = f[c_id];
        try {
            row.a_score = std::stod(f[c_a]);
            row.b_score = std::stod(f[c_b]);
        } catch (const std::exception&) {
            throw InputError(origin + ":" + std::to_string(lineno) + ": bad numeric field");
        }
        row.a_label = f[c_al];
        row.b_label = f[c_bl];
        if (c_gender) row.gender = f[*c_gender];
        if (c_category) row.category = f[*c_category];
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_crosstab_csv(std::ostream& out, const std::vector<ParticipantResult>& results,
                        const std::vector<std::string>& overrides) {
    write_comment_header(out,
                         "wisdom level x confidence label, row percentages (rows sum to 100)",
                         overrides);
    out << "# wisdom_level is the max-membership label of the defuzzified wisdom score\n";
    out << "wisdom_level,n";
    for (auto l : kConfidenceLabels) out << "," << l;
    out << "\n";

    static constexpr std::array<std::string_view, 3> kWisdomOrder = {"Low", "Moderate", "High"};
    for (std::string_view level : kWisdomOrder) {
        std::size_t n = 0;
        std::array<std::size_t, 7> counts{};
        for (const ParticipantResult& r : results) {
            if (r.z.a_label != level) continue;
            ++n;
            auto it = std::find(kConfidenceLabels.begin(), kConfidenceLabels.end(), r.z.b_label);
            counts[static_cast<std::size_t>(it - kConfidenceLabels.begin())] += 1;
        }
        if (n == 0) continue; // only observed wisdom levels get a row
        out << level << "," << n;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            out << "," << format_double(100.0 * static_cast<double>(counts[i]) /
                                        static_cast<double>(n));
        }
        out << "\n";
    }
}

StatsBundle run_stats_battery(const std::vector<ZRow>& rows, const ExternalScales& scales,
                              const StatsSettings& settings) {
    StatsBundle bundle;

    // Rank correlations of the wisdom score against each external measure.
    for (std::size_t m = 0; m < scales.measures.size(); ++m) {
        std::vector<double> x, y;
        for (const ZRow& row : rows) {
            auto it = scales.by_participant.find(row.participant_id);
            if (it == scales.by_participant.end()) continue;
            x.push_back(row.a_score);
            y.push_back(it->second[m]);
        }
        const std::string& measure = scales.measures[m];
        if (x.size() < 3) {
            bundle.notices.push_back("measure " + measure + " skipped: only " +
                                     std::to_string(x.size()) + " joined rows (need 3)");
            continue;
        }
        TestReport report;
        report.measure = measure;
        report.n = x.size();
        try {
            SpearmanResult s = spearman_rho(x, y, settings.p_mode);
            report.rho = s.rho;
            report.p = s.p;
        } catch (const DegenerateDataError& e) {
            bundle.notices.push_back("measure " + measure + " skipped: " + e.what());
            continue;
        }
        if (x.size() >= 8) {
            BootstrapOptions opt;
            opt.resamples = settings.resamples;
            opt.level = settings.level;
            opt.seed = settings.seed;
            BootstrapResult ci = bootstrap_bca_ci(x, y, spearman_statistic(), opt);
            report.ci_lo = ci.lo;
            report.ci_hi = ci.hi;
            report.bootstrap_skipped = ci.skipped;
            report.ci_degenerate = ci.degenerate;
        } else {
            report.ci_lo = std::numeric_limits<double>::quiet_NaN();
            report.ci_hi = std::numeric_limits<double>::quiet_NaN();
        }
        bundle.correlations.push_back(std::move(report));
    }

    std::vector<double> pvalues;
    pvalues.reserve(bundle.correlations.size());
    for (const TestReport& r : bundle.correlations) pvalues.push_back(r.p);
    std::vector<double> adjusted = fdr_adjust(pvalues);
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
        bundle.correlations[i].p_adjusted = adjusted[i];
    }

    // Group differences on the wisdom score over the demographic columns.
    auto groups_by = [&](auto key) {
        std::map<std::string, std::vector<double>> grouped;
        for (const ZRow& row : rows) {
            std::string k = key(row);
            if (!k.empty()) grouped[k].push_back(row.a_score);
        }
        return grouped;
    };

    auto gender_groups = groups_by([](const ZRow& r) { return r.gender; });
    if (gender_groups.size() == 2) {
        auto it = gender_groups.begin();
        const auto& [name_a, values_a] = *it++;
        const auto& [name_b, values_b] = *it;
        GroupTestResult t;
        t.test = "mann_whitney";
        t.variable = "gender";
        t.groups = {name_a, name_b};
        t.counts = {values_a.size(), values_b.size()};
        try {
            MannWhitneyResult r = mann_whitney_u(values_a, values_b, settings.p_mode);
            t.statistic = r.u;
            t.z = r.z;
            t.p = r.p;
            bundle.group_tests.push_back(std::move(t));
        } catch (const DegenerateDataError& e) {
            bundle.notices.push_back(std::string("gender test skipped: ") + e.what());
        }
    } else {
        bundle.notices.push_back("gender test skipped: found " +
                                 std::to_string(gender_groups.size()) +
                                 " non-empty gender values (need exactly 2)");
    }

    auto category_groups = groups_by([](const ZRow& r) { return r.category; });
    if (category_groups.size() >= 2) {
        GroupTestResult t;
        t.test = "kruskal_wallis";
        t.variable = "category";
        std::vector<std::vector<double>> groups;
        for (const auto& [name, values] : category_groups) {
            t.groups.push_back(name);
            t.counts.push_back(values.size());
            groups.push_back(values);
        }
        KruskalWallisResult r = kruskal_wallis(groups, settings.p_mode);
        t.statistic = r.h;
        t.df = r.df;
        t.p = r.p;
        if (r.degenerate) t.notes.push_back("all pooled scores identical; H pinned to 0");
        bundle.group_tests.push_back(std::move(t));
    } else {
        bundle.notices.push_back("category test skipped: found " +
                                 std::to_string(category_groups.size()) +
                                 " non-empty category values (need at least 2)");
    }

    return bundle;
}

void write_stats_report_csv(std::ostream& out, const std::vector<TestReport>& reports,
                            const std::vector<std::string>& overrides) {
    write_comment_header(out, "rank correlation of wisdom score vs external measures",
                         overrides);
    out << "measure,n,rho,p,p_adjusted,ci_lo,ci_hi,notes\n";
    for (const TestReport& r : reports) {
        std::vector<std::string> notes;
        out << csv_escape(r.measure) << "," << r.n << "," << format_double(r.rho) << ","
            << format_double(r.p) << "," << format_double(r.p_adjusted) << ",";
        if (std::isnan(r.ci_lo)) {
            out << ",";
            notes.push_back("ci skipped (n < 8)");
        } else {
            out << format_double(r.ci_lo) << "," << format_double(r.ci_hi);
        }
        if (r.bootstrap_skipped > 0) {
            notes.push_back(std::to_string(r.bootstrap_skipped) + " resamples undefined");
        }
        if (r.ci_degenerate) notes.push_back("resample distribution degenerate");
        out << "," << csv_escape(join(notes, ';')) << "\n";
    }
}

void write_group_tests_csv(std::ostream& out, const std::vector<GroupTestResult>& tests,
                           const std::vector<std::string>& overrides) {
    write_comment_header(out, "group differences on the wisdom score", overrides);
    out << "test,variable,groups,counts,statistic,z,df,p,notes\n";
    for (const GroupTestResult& t : tests) {
        std::vector<std::string> counts;
        for (std::size_t c : t.counts) counts.push_back(std::to_string(c));
        out << t.test << "," << t.variable << "," << csv_escape(join(t.groups, '|')) << ","
            << join(counts, '|') << "," << format_double(t.statistic) << ",";
        if (t.z) out << format_double(*t.z);
        out << ",";
        if (t.df) out << *t.df;
        out << "," << format_double(t.p) << "," << csv_escape(join(t.notes, ';')) << "\n";
    }
}

std::vector<std::string> emit_reports(const std::vector<ParticipantResult>& results,
                                      const Pipeline& pipeline, const ExternalScales* scales,
                                      std::ostream& log) {
    if (results.empty()) throw InputError("no results to report");
    const PipelineConfig& cfg = pipeline.config();
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw InputError("cannot create output dir " + cfg.output_dir + ": " + ec.message());

    std::vector<std::string> written;

    {
        auto out = open_report(cfg.output_dir, "znumbers.csv", written);
        write_znumbers_csv(out, results, cfg.overrides);
    }
    {
        auto out = open_report(cfg.output_dir, "crosstab.csv", written);
        write_crosstab_csv(out, results, cfg.overrides);
    }
    {
        // Pooled per-response confidence, participants already id-sorted and
        // responses dilemma-sorted, so the sample order is canonical.
        std::vector<double> pooled;
        for (const ParticipantResult& r : results) {
            pooled.insert(pooled.end(), r.response_b.begin(), r.response_b.end());
        }
        DensityCurve curve = kde_density(pooled, cfg.kde_bandwidth, cfg.kde_grid_points);
        auto out = open_report(cfg.output_dir, "kde_confidence.csv", written);
        write_comment_header(out, "confidence density over pooled normalized ratings",
                             cfg.overrides);
        write_csv(curve, out);
    }
    for (std::size_t c = 0; c < kComponents.size(); ++c) {
        std::string name{to_string(kComponents[c])};
        std::vector<double> pooled;
        for (const ParticipantResult& r : results) {
            for (const auto& row : r.raw_scores) pooled.push_back(row[c]);
        }
        try {
            double h = silverman_bandwidth(pooled);
            DensityCurve curve = kde_density(pooled, h, cfg.kde_grid_points);
            auto out = open_report(cfg.output_dir, "kde_component_" + name + ".csv", written);
            write_comment_header(out, "score density for component " + name +
                                          " (plug-in bandwidth " + format_double(h) + ")",
                                 cfg.overrides);
            write_csv(curve, out);
        } catch (const DegenerateDataError& e) {
            log << "notice: component " << name << " curve skipped: " << e.what() << "\n";
        } catch (const InputError& e) {
            // A single pooled score can't seed bandwidth selection; skip, don't fail.
            log << "notice: component " << name << " curve skipped: " << e.what() << "\n";
        }
    }

    if (scales != nullptr) {
        if (scales->measures.empty() || scales->by_participant.empty()) {
            log << "notice: external scales empty; stats report skipped\n";
        } else {
            std::vector<ZRow> rows;
            rows.reserve(results.size());
            for (const ParticipantResult& r : results) rows.push_back(row_of(r));
            StatsBundle bundle = run_stats_battery(rows, *scales, cfg.stats);
            for (const std::string& n : bundle.notices) log << "notice: " << n << "\n";
            {
                auto out = open_report(cfg.output_dir, "stats_report.csv", written);
                write_stats_report_csv(out, bundle.correlations, cfg.overrides);
            }
            {
                auto out = open_report(cfg.output_dir, "group_tests.csv", written);
                write_group_tests_csv(out, bundle.group_tests, cfg.overrides);
            }
        }
    }

    return written;
}

std::string explain_participant(const ParticipantResult& result, const Pipeline& pipeline) {
    std::ostringstream out;
    out << "participant " << result.participant_id << "\n";
    out << "component inputs (avg Low/Mod/High):\n";
    for (std::size_t c = 0; c < kComponents.size(); ++c) {
        const ComponentSummary& s = result.components[c];
        out << "  " << to_string(kComponents[c]) << ": [" << format_double(s.avg.degree(0))
            << ", " << format_double(s.avg.degree(1)) << ", " << format_double(s.avg.degree(2))
            << "] label=" << s.label << (s.degenerate ? " (degenerate)" : "") << "\n";
    }
    out << "rule firings:\n";
    const auto& rules = pipeline.rules().rules();
    double max_ordinary = 0.0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (!rules[i].is_default) max_ordinary = std::max(max_ordinary, result.rule_alphas[i]);
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
        out << "  " << rules[i].id << ": alpha=" << format_double(result.rule_alphas[i]);
        if (rules[i].is_default) {
            out << (result.rule_alphas[i] > 0.0
                        ? "  (default fired: every ordinary rule below 0.5, max "
                        : "  (default idle: max ordinary alpha ")
                << format_double(max_ordinary) << ")";
        }
        out << "  | " << to_text(rules[i]) << "\n";
    }
    for (const std::string& w : result.warnings) out << "warning: " << w << "\n";
    out << "z-number: a_score=" << format_double(result.z.a_score) << " a_label=" << result.z.a_label
        << " b_score=" << format_double(result.z.b_score) << " b_label=" << result.z.b_label << "\n";
    return out.str();
}

} // namespace zwise

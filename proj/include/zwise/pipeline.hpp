#pragma once

// End-to-end batch orchestration: transcripts -> component scores -> averaged
// fuzzy vectors -> rule inference -> Z-numbers, plus report emission. The
// Pipeline object owns everything derived from config (lexicons, rule base,
// output partition) so processing a participant is a pure function of it.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zwise/config.hpp"
#include "zwise/corpus.hpp"
#include "zwise/fis.hpp"
#include "zwise/stats.hpp"
#include "zwise/text.hpp"

namespace zwise {

struct ParticipantResult {
    std::string participant_id;
    std::optional<Demographics> demographics;

    // One summary per component in canonical enum order.
    std::vector<ComponentSummary> components;
    // Crisp marker-density scores, scores[d][k] = dilemma d, component k.
    std::vector<std::array<double, 5>> raw_scores;
    // Normalized per-response confidence, dilemma order (pooled for the KDE).
    std::vector<double> response_b;

    ZNumber z;
    // Per-rule firing strengths in rule-base order.
    std::vector<double> rule_alphas;
    std::vector<std::string> warnings;
};

class Pipeline {
public:
    // Loads lexicons and rule base from the configured paths (builtin seeds
    // and builtin base when paths are empty). Throws on any config problem.
    explicit Pipeline(PipelineConfig cfg);

    const PipelineConfig& config() const { return cfg_; }
    const RuleBase& rules() const { return rules_; }
    const OutputPartition& partition() const { return partition_; }
    const Lexicon& lexicon(Component c) const { return lexicons_[static_cast<std::size_t>(c)]; }

    ParticipantResult process(const ParticipantRecord& record) const;

    // All participants, processed independently (in parallel for large
    // corpora) and returned sorted by participant_id, so output order never
    // depends on input order.
    std::vector<ParticipantResult> run(const std::vector<ParticipantRecord>& corpus) const;

private:
    PipelineConfig cfg_;
    std::array<Lexicon, kComponents.size()> lexicons_;
    RuleBase rules_;
    OutputPartition partition_;
};

// --- report emission ------------------------------------------------------

// Writes znumbers.csv, crosstab.csv, kde_confidence.csv and per-component KDE
// curves into config.output_dir; adds stats_report.csv and group_tests.csv
// when external scales are supplied. Returns the paths written, logs notices
// (skipped curves, skipped tests) to `log`.
std::vector<std::string> emit_reports(const std::vector<ParticipantResult>& results,
                                      const Pipeline& pipeline, const ExternalScales* scales,
                                      std::ostream& log);

// Per-participant results table. Comment header lines start with '#' and
// carry config override provenance; the reader skips them.
void write_znumbers_csv(std::ostream& out, const std::vector<ParticipantResult>& results,
                        const std::vector<std::string>& overrides);

// The slice of a results row the stats battery needs.
struct ZRow {
    std::string participant_id;
    double a_score = 0.0;
    std::string a_label;
    double b_score = 0.0;
    std::string b_label;
    std::string gender;
    std::string category;
};

std::vector<ZRow> read_znumbers_csv(std::istream& in, const std::string& origin);

void write_crosstab_csv(std::ostream& out, const std::vector<ParticipantResult>& results,
                        const std::vector<std::string>& overrides);

// --- validity battery ------------------------------------------------------

struct GroupTestResult {
    std::string test;     // "mann_whitney" or "kruskal_wallis"
    std::string variable; // grouping column
    std::vector<std::string> groups;
    std::vector<std::size_t> counts;
    double statistic = 0.0;            // U or H
    std::optional<double> z;           // Mann-Whitney only
    std::optional<std::size_t> df;     // Kruskal-Wallis only
    double p = 1.0;
    std::vector<std::string> notes;
};

struct StatsBundle {
    std::vector<TestReport> correlations; // a_score vs each external measure
    std::vector<GroupTestResult> group_tests;
    std::vector<std::string> notices;     // skipped measures/tests and why
};

// Inner-joins rows with the external scales by participant_id, runs the rank
// correlation + bootstrap CI per measure with BH adjustment across measures,
// then the group-difference tests on the demographic columns.
StatsBundle run_stats_battery(const std::vector<ZRow>& rows, const ExternalScales& scales,
                              const StatsSettings& settings);

void write_stats_report_csv(std::ostream& out, const std::vector<TestReport>& reports,
                            const std::vector<std::string>& overrides);
void write_group_tests_csv(std::ostream& out, const std::vector<GroupTestResult>& tests,
                           const std::vector<std::string>& overrides);

// Human-readable per-rule firing table plus the resulting Z-number.
std::string explain_participant(const ParticipantResult& result, const Pipeline& pipeline);

} // namespace zwise

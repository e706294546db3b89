#pragma once

// Pipeline configuration: every tunable constant in one struct, defaulting to
// the published values. Config files are JSON; unknown keys are rejected so a
// typo cannot silently fall back to a default. Each accepted non-default value
// is echoed into `overrides` and reprinted in report headers for provenance.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zwise/attribute_a.hpp"
#include "zwise/attribute_b.hpp"
#include "zwise/fuzzy.hpp"
#include "zwise/stats.hpp"

namespace zwise {

struct StatsSettings {
    std::size_t resamples = 2000;   // bootstrap replicates
    std::uint64_t seed = 42;        // RNG seed for the bootstrap
    double level = 0.95;            // two-sided CI level
    PValueMode p_mode = PValueMode::Asymptotic;
};

struct PipelineConfig {
    // Empty path = builtin seed lexicon / builtin rule base.
    std::array<std::string, kComponents.size()> lexicon_paths{};
    std::string rules_path;

    std::array<ComponentThresholds, kComponents.size()> component_thresholds =
        default_component_thresholds();
    ConfidenceThresholds confidence_thresholds = ConfidenceThresholds::published();

    double kde_bandwidth = 0.12;      // confidence-calibration bandwidth
    std::size_t kde_grid_points = 512;

    double dx = 0.1;                  // output-universe step
    bool strict_mode = false;         // one-hot component vectors before inference
    double default_rule_strength = 0.5;

    std::size_t expected_responses = kDilemmaCount;
    StatsSettings stats;
    std::string output_dir = "out";

    // Human-readable "key=value" provenance lines, appended by the loader and
    // by CLI flag handling; emitted as comment headers in every report.
    std::vector<std::string> overrides;

    void validate() const; // throws ConfigError on structural violations
};

// Loads `path` (JSON object) over `base`, recording overrides. Unknown keys
// anywhere in the document raise ConfigError.
PipelineConfig load_config(const std::string& path, PipelineConfig base = {});

// Linguistic-variable exchange format: {"name":…, "terms":[{"label":…,
// "kind":…, "breakpoints":[…]}…]}. Round-trips exactly (values are parsed as
// doubles, no quantization).
std::string variable_to_json(const LinguisticVariable& v);
LinguisticVariable variable_from_json(const std::string& text);

} // namespace zwise

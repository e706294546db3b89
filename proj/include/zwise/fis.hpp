#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zwise/attribute_b.hpp"
#include "zwise/fuzzy.hpp"
#include "zwise/rules.hpp"

namespace zwise {

// The fixed three-set output partition (Low/Moderate/High triangles with
// bases [0,0.4], [0.3,0.7], [0.6,1.0]) sampled at a configurable step. The
// sets themselves are not configurable; only the grid resolution is.
class OutputPartition {
public:
    explicit OutputPartition(double dx = 0.1);

    double dx() const { return dx_; }
    std::size_t steps() const { return steps_; } // grid has steps_+1 points
    double grid_x(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(steps_); }

    const MembershipFunction& output_set(Level l) const { return sets_[static_cast<std::size_t>(l)]; }
    // Grid index range [first, last] covering the set's base interval.
    std::pair<std::size_t, std::size_t> support_range(Level l) const;

private:
    double dx_;
    std::size_t steps_;
    std::vector<MembershipFunction> sets_;
};

// Strength of one ordinary rule against the component degree vectors.
// The default rule has no strength of its own; asking for one is an error.
double firing_strength(const Rule& rule, const ComponentDegrees& inputs);

struct InferenceResult {
    // One entry per rule in base order. The default rule's entry holds the
    // strength it actually fired with (0 when the trigger did not trip).
    std::vector<double> alphas;
    std::vector<double> grid;
    std::vector<double> aggregated;
};

// Mamdani step: min-clip every fired consequent set over its support, then
// pointwise max across rules. The default rule fires at default_strength
// exactly when every ordinary rule stays below the 0.5 trigger.
InferenceResult infer(const ComponentDegrees& inputs, const RuleBase& rules,
                      const OutputPartition& partition, double default_strength = 0.5);

// Discrete centroid sum(x*mu)/sum(mu). An all-zero curve has no centroid;
// with the default rule in the base that cannot happen.
double defuzzify_centroid(std::span<const double> grid, std::span<const double> mu);

// Max-membership wisdom category at the score, lower label on exact ties.
Level final_label(double score, const OutputPartition& partition);

// Per-component one-hot vectors at the dominant label: the strict crisp-label
// reading, available behind the config flag.
ComponentDegrees one_hot_dominant(const ComponentDegrees& inputs);

ZNumber make_z_number(double a_score, double b_score, const OutputPartition& partition,
                      const ConfidenceThresholds& confidence);

} // namespace zwise

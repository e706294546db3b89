#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "zwise/fuzzy.hpp"

namespace zwise {

// Responses per participant. Aggregation takes the count as a parameter so
// tests can run tiny grids; this is the deployed default.
inline constexpr std::size_t kDilemmaCount = 13;

// Breakpoints t1..t6 carving a component score into Low/Mod/High coverage:
// Low is saturated up to t1 and gone at t2, Mod spans (t2,t5) with plateau
// [t3,t4], High starts at t5 and saturates at t6. Supports are disjoint by
// construction; the gaps at exactly t2 and t5 belong to nothing.
class ComponentThresholds {
public:
    ComponentThresholds(Component component, const std::array<double, 6>& t);

    Component component() const { return component_; }
    const std::array<double, 6>& values() const { return t_; }

    // Calibrated on the study sample; used whenever config does not override.
    static ComponentThresholds defaults(Component component);

private:
    Component component_;
    std::array<double, 6> t_;
};

// Degrees over {Low, Mod, High} for one score. Throws InputError when x is
// outside [0,1].
FuzzyVector fuzzify_component(double x, const ComponentThresholds& th);

struct AggregatedComponent {
    FuzzyVector avg;
    std::string label;
    // True when every averaged degree is zero, i.e. all responses sat on
    // coverage gaps and the label is purely the tie-break speaking.
    bool degenerate = false;
};

// Per-label arithmetic mean of the response vectors, then the dominant label.
// expected_count guards against partially ingested participants.
AggregatedComponent aggregate_responses(const std::vector<FuzzyVector>& vectors,
                                        std::size_t expected_count = kDilemmaCount);

struct ComponentSummary {
    Component component = Component::PT;
    FuzzyVector avg;
    std::string label;
    bool degenerate = false;
    // Per-response dominant labels, diagnostics only; the participant label
    // above comes from the averaged vector, not from voting these.
    std::vector<std::string> response_labels;
};

// The accumulate-and-average loop over the full score grid: scores[d][k] is
// dilemma d's score for component kComponents[k]. Missing (non-finite) cells
// raise InputError naming the dilemma and component.
std::vector<ComponentSummary> compute_attribute_a(
    const std::vector<std::array<double, 5>>& scores,
    const std::array<ComponentThresholds, 5>& thresholds,
    std::size_t expected_count = kDilemmaCount);

// Convenience: defaults for all five components, in kComponents order.
std::array<ComponentThresholds, 5> default_component_thresholds();

} // namespace zwise

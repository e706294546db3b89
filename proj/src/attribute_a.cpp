#include "zwise/attribute_a.hpp"

#include <cmath>

#include "zwise/errors.hpp"

namespace zwise {

namespace {

const std::vector<std::string>& level_labels() {
    static const std::vector<std::string> labels = {"Low", "Mod", "High"};
    return labels;
}

constexpr std::array<std::array<double, 6>, 5> kDefaultThresholds = {{
    {0.10, 0.22, 0.38, 0.52, 0.66, 0.81}, // PT
    {0.13, 0.26, 0.39, 0.53, 0.69, 0.86}, // Ref
    {0.11, 0.24, 0.37, 0.51, 0.67, 0.85}, // Pro
    {0.09, 0.20, 0.35, 0.50, 0.65, 0.82}, // REA
    {0.12, 0.25, 0.40, 0.54, 0.68, 0.84}, // IH
}};

} // namespace

ComponentThresholds::ComponentThresholds(Component component, const std::array<double, 6>& t)
    : component_(component), t_(t) {
    double prev = 0.0;
    for (double v : t_) {
        if (!std::isfinite(v) || v <= prev) {
            throw ConfigError("component thresholds must satisfy 0 < t1 < ... < t6 < 1");
        }
        prev = v;
    }
    if (prev >= 1.0) {
        throw ConfigError("component thresholds must satisfy 0 < t1 < ... < t6 < 1");
    }
}

ComponentThresholds ComponentThresholds::defaults(Component component) {
    return ComponentThresholds(component, kDefaultThresholds[static_cast<std::size_t>(component)]);
}

std::array<ComponentThresholds, 5> default_component_thresholds() {
    return {ComponentThresholds::defaults(Component::PT),
            ComponentThresholds::defaults(Component::Ref),
            ComponentThresholds::defaults(Component::Pro),
            ComponentThresholds::defaults(Component::REA),
            ComponentThresholds::defaults(Component::IH)};
}

FuzzyVector fuzzify_component(double x, const ComponentThresholds& th) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw InputError("component score outside [0,1]");
    }
    const auto& t = th.values();
    auto low = MembershipFunction::left_shoulder(t[0], t[1]);
    auto mod = MembershipFunction::trapezoidal(t[1], t[2], t[3], t[4]);
    auto high = MembershipFunction::right_shoulder(t[4], t[5]);
    return FuzzyVector(level_labels(), {low.evaluate(x), mod.evaluate(x), high.evaluate(x)});
}

AggregatedComponent aggregate_responses(const std::vector<FuzzyVector>& vectors,
                                        std::size_t expected_count) {
    if (vectors.size() != expected_count) {
        throw InputError("expected " + std::to_string(expected_count) + " response vectors, got " +
                         std::to_string(vectors.size()));
    }
    if (vectors.empty()) throw InputError("cannot aggregate zero response vectors");
    std::vector<double> sum(vectors.front().size(), 0.0);
    for (const auto& v : vectors) {
        if (v.size() != sum.size()) throw InputError("mixed-size fuzzy vectors in aggregation");
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v.degree(i);
    }
    for (double& s : sum) s /= static_cast<double>(vectors.size());

    bool degenerate = true;
    for (double s : sum) {
        if (s != 0.0) { degenerate = false; break; }
    }
    FuzzyVector avg(vectors.front().labels(), std::move(sum));
    std::string label = argmax_label(avg).label;
    return {std::move(avg), std::move(label), degenerate};
}

std::vector<ComponentSummary> compute_attribute_a(
    const std::vector<std::array<double, 5>>& scores,
    const std::array<ComponentThresholds, 5>& thresholds,
    std::size_t expected_count) {
    if (scores.size() != expected_count) {
        throw InputError("score grid has " + std::to_string(scores.size()) + " dilemmas, expected " +
                         std::to_string(expected_count));
    }
    for (std::size_t d = 0; d < scores.size(); ++d) {
        for (std::size_t k = 0; k < 5; ++k) {
            if (!std::isfinite(scores[d][k])) {
                throw InputError("missing " + std::string(to_string(kComponents[k])) +
                                 " score for dilemma " + std::to_string(d + 1));
            }
        }
    }

    std::vector<ComponentSummary> out;
    out.reserve(5);
    for (std::size_t k = 0; k < 5; ++k) {
        if (thresholds[k].component() != kComponents[k]) {
            throw ConfigError("thresholds out of component order");
        }
        std::vector<FuzzyVector> vecs;
        std::vector<std::string> response_labels;
        vecs.reserve(scores.size());
        for (std::size_t d = 0; d < scores.size(); ++d) {
            vecs.push_back(fuzzify_component(scores[d][k], thresholds[k]));
            response_labels.push_back(argmax_label(vecs.back()).label);
        }
        AggregatedComponent agg = aggregate_responses(vecs, expected_count);
        out.push_back({kComponents[k], std::move(agg.avg), std::move(agg.label), agg.degenerate,
                       std::move(response_labels)});
    }
    return out;
}

} // namespace zwise

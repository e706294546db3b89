#include "zwise/fis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zwise/errors.hpp"

namespace zwise {

namespace {

// Base intervals of the three output triangles.
constexpr double kBase[3][2] = {{0.0, 0.4}, {0.3, 0.7}, {0.6, 1.0}};

double eval_antecedent(const Antecedent& a, const ComponentDegrees& in) {
    using K = Antecedent::Kind;
    switch (a.kind) {
        case K::Atom:
            return degrees_of(in, a.leaf.component).at(a.leaf.level);
        case K::And: {
            double m = 1.0;
            for (const auto& c : a.children) m = std::min(m, eval_antecedent(c, in));
            return m;
        }
        case K::Or: {
            double m = 0.0;
            for (const auto& c : a.children) m = std::max(m, eval_antecedent(c, in));
            return m;
        }
        case K::AtLeastKOf: {
            std::vector<double> d;
            d.reserve(a.atoms.size());
            for (const auto& at : a.atoms) d.push_back(degrees_of(in, at.component).at(at.level));
            // k-th largest: the largest strength at which k atoms still hold.
            std::nth_element(d.begin(), d.begin() + static_cast<long>(a.k - 1), d.end(),
                             std::greater<>());
            double kth = d[a.k - 1];
            return kth >= a.cutoff ? kth : 0.0;
        }
        case K::ExactlyOneLowOf: {
            // Crisp count of dominantly-low members, fuzzy strength.
            std::size_t low_count = 0;
            Component low_member = a.members.front();
            for (Component m : a.members) {
                if (dominant_level(degrees_of(in, m)) == Level::Low) {
                    ++low_count;
                    low_member = m;
                }
            }
            if (low_count != 1) return 0.0;
            double strength = degrees_of(in, low_member).low;
            for (Component m : a.members) {
                if (m == low_member) continue;
                const auto& d = degrees_of(in, m);
                strength = std::min(strength, std::max(d.mod, d.high));
            }
            return strength;
        }
        case K::AllEqual: {
            double m = 1.0;
            for (const auto& d : in) m = std::min(m, d.at(a.level));
            return m;
        }
        default: { // NoneAtLevel: crisp gate
            for (const auto& d : in) {
                if (d.at(a.level) >= a.cutoff) return 0.0;
            }
            return 1.0;
        }
    }
}

} // namespace

OutputPartition::OutputPartition(double dx) : dx_(dx) {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("grid step must be positive");
    double steps = std::round(1.0 / dx);
    if (steps < 5.0 || std::abs(steps * dx - 1.0) > 1e-9) {
        throw ConfigError("grid step must divide the unit interval evenly");
    }
    steps_ = static_cast<std::size_t>(steps);
    sets_.push_back(MembershipFunction::triangular(0.0, 0.2, 0.4));
    sets_.push_back(MembershipFunction::triangular(0.3, 0.5, 0.7));
    sets_.push_back(MembershipFunction::triangular(0.6, 0.8, 1.0));
}

std::pair<std::size_t, std::size_t> OutputPartition::support_range(Level l) const {
    const auto& base = kBase[static_cast<std::size_t>(l)];
    double s = static_cast<double>(steps_);
    auto first = static_cast<std::size_t>(std::ceil(base[0] * s - 1e-9));
    auto last = static_cast<std::size_t>(std::floor(base[1] * s + 1e-9));
    return {first, last};
}

double firing_strength(const Rule& rule, const ComponentDegrees& inputs) {
    if (rule.is_default) {
        throw InputError("the default rule has no standalone firing strength");
    }
    return eval_antecedent(rule.antecedent, inputs);
}

InferenceResult infer(const ComponentDegrees& inputs, const RuleBase& rules,
                      const OutputPartition& partition, double default_strength) {
    if (!(default_strength > 0.0 && default_strength <= 1.0)) {
        throw ConfigError("default rule strength must lie in (0,1]");
    }

    InferenceResult out;
    out.alphas.assign(rules.size(), 0.0);
    out.grid.resize(partition.steps() + 1);
    for (std::size_t i = 0; i < out.grid.size(); ++i) out.grid[i] = partition.grid_x(i);
    out.aggregated.assign(out.grid.size(), 0.0);

    auto clip_into = [&](Level consequent, double alpha) {
        auto [first, last] = partition.support_range(consequent);
        const auto& set = partition.output_set(consequent);
        for (std::size_t i = first; i <= last; ++i) {
            double clipped = std::min(alpha, set.evaluate(out.grid[i]));
            out.aggregated[i] = std::max(out.aggregated[i], clipped);
        }
    };

    double max_alpha = 0.0;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Rule& rule = rules.rules()[r];
        if (rule.is_default) continue;
        double alpha = firing_strength(rule, inputs);
        out.alphas[r] = alpha;
        max_alpha = std::max(max_alpha, alpha);
        if (alpha > 0.0) clip_into(rule.consequent, alpha);
    }
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Rule& rule = rules.rules()[r];
        if (!rule.is_default) continue;
        if (max_alpha < 0.5) {
            out.alphas[r] = default_strength;
            clip_into(rule.consequent, default_strength);
        }
    }
    return out;
}

double defuzzify_centroid(std::span<const double> grid, std::span<const double> mu) {
    if (grid.size() != mu.size() || grid.empty()) {
        throw InputError("centroid needs matching non-empty grid and membership arrays");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        num += grid[i] * mu[i];
        den += mu[i];
    }
    if (den == 0.0) {
        throw DegenerateDataError("all-zero aggregated curve has no centroid");
    }
    return num / den;
}

Level final_label(double score, const OutputPartition& partition) {
    if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
        throw InputError("wisdom score outside [0,1]");
    }
    std::vector<double> degrees;
    degrees.reserve(3);
    for (Level l : kLevels) degrees.push_back(partition.output_set(l).evaluate(score));
    if (*std::max_element(degrees.begin(), degrees.end()) == 0.0) {
        // Only 0 and 1 sit outside every set's open support (the extreme
        // triangles' feet); label them by the nearest peak, not the all-zero
        // tie-break, so a perfect score reads High.
        std::size_t pick = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < kLevels.size(); ++i) {
            double peak = partition.output_set(kLevels[i]).breakpoints()[1];
            if (std::fabs(score - peak) < dist) {
                dist = std::fabs(score - peak);
                pick = i;
            }
        }
        return kLevels[pick];
    }
    return kLevels[argmax_index(degrees)];
}

ComponentDegrees one_hot_dominant(const ComponentDegrees& inputs) {
    ComponentDegrees out{};
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        switch (dominant_level(inputs[k])) {
            case Level::Low: out[k].low = 1.0; break;
            case Level::Mod: out[k].mod = 1.0; break;
            default: out[k].high = 1.0; break;
        }
    }
    return out;
}

ZNumber make_z_number(double a_score, double b_score, const OutputPartition& partition,
                      const ConfidenceThresholds& confidence) {
    ZNumber z;
    z.a_score = a_score;
    z.a_label = std::string(wisdom_label(final_label(a_score, partition)));
    z.b_score = b_score;
    z.b_label = confidence_label(b_score, confidence);
    return z;
}

} // namespace zwise

#include "zwise/attribute_b.hpp"

#include <cmath>

#include "zwise/errors.hpp"

namespace zwise {

ConfidenceThresholds::ConfidenceThresholds(const std::array<double, 9>& t) : t_(t) {
    if (t_[0] != 0.0 || t_[8] != 1.0) {
        throw ConfigError("confidence thresholds must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || t_[i] <= t_[i - 1]) {
            throw ConfigError("confidence thresholds must be strictly increasing");
        }
    }
}

ConfidenceThresholds ConfidenceThresholds::from_inner(const std::array<double, 7>& inner) {
    std::array<double, 9> t;
    t[0] = 0.0;
    for (std::size_t i = 0; i < 7; ++i) t[i + 1] = inner[i];
    t[8] = 1.0;
    return ConfidenceThresholds(t);
}

ConfidenceThresholds ConfidenceThresholds::published() {
    return from_inner({0.05, 0.19, 0.37, 0.50, 0.63, 0.84, 0.93});
}

std::array<double, 7> ConfidenceThresholds::inner() const {
    std::array<double, 7> out;
    for (std::size_t i = 0; i < 7; ++i) out[i] = t_[i + 1];
    return out;
}

LinguisticVariable make_confidence_variable(const ConfidenceThresholds& th) {
    const auto& t = th.values();
    std::vector<std::string> labels(kConfidenceLabels.begin(), kConfidenceLabels.end());
    std::vector<MembershipFunction> fns;
    fns.push_back(MembershipFunction::left_shoulder(t[1], t[2]));
    for (std::size_t i = 2; i <= 6; ++i) {
        fns.push_back(MembershipFunction::triangular(t[i - 1], t[i], t[i + 1]));
    }
    fns.push_back(MembershipFunction::right_shoulder(t[6], t[7]));
    return LinguisticVariable("confidence", std::move(labels), std::move(fns));
}

double normalize_rating(double r) {
    if (!std::isfinite(r) || r < 1.0 || r > 10.0) {
        throw InputError("confidence rating outside [1,10]");
    }
    return (r - 1.0) / 9.0;
}

double participant_confidence(std::span<const double> normalized_ratings) {
    if (normalized_ratings.empty()) throw InputError("no ratings to average");
    double sum = 0.0;
    for (double b : normalized_ratings) {
        if (!std::isfinite(b) || b < 0.0 || b > 1.0) {
            throw InputError("normalized rating outside [0,1]");
        }
        sum += b;
    }
    return sum / static_cast<double>(normalized_ratings.size());
}

FuzzyVector fuzzify_confidence(double b, const ConfidenceThresholds& th) {
    if (!std::isfinite(b) || b < 0.0 || b > 1.0) {
        throw InputError("confidence factor outside [0,1]");
    }
    return make_confidence_variable(th).fuzzify(b);
}

std::string confidence_label(double b, const ConfidenceThresholds& th) {
    return argmax_label(fuzzify_confidence(b, th)).label;
}

ConfidenceCalibration calibrate_confidence_thresholds(std::span<const double> pooled_b,
                                                      double bandwidth,
                                                      std::size_t grid_points) {
    for (double b : pooled_b) {
        if (!std::isfinite(b) || b < 0.0 || b > 1.0) {
            throw InputError("pooled confidence values must lie in [0,1]");
        }
    }
    DensityCurve curve = kde_density(pooled_b, bandwidth, grid_points);
    std::vector<double> valleys = thresholds_from_valleys(find_valleys(curve), 7);
    std::array<double, 7> inner;
    for (std::size_t i = 0; i < 7; ++i) inner[i] = valleys[i];
    return {ConfidenceThresholds::from_inner(inner), std::move(curve)};
}

} // namespace zwise

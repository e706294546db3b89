#include "zwise/fuzzy.hpp"

#include <cmath>
#include <sstream>

#include "zwise/errors.hpp"

namespace zwise {

std::string_view to_string(Component c) {
    switch (c) {
        case Component::PT: return "PT";
        case Component::Ref: return "Ref";
        case Component::Pro: return "Pro";
        case Component::REA: return "REA";
        default: return "IH";
    }
}

Component component_from_string(std::string_view name) {
    if (name == "PT") return Component::PT;
    if (name == "Ref") return Component::Ref;
    if (name == "Pro" || name == "PO") return Component::Pro;
    if (name == "REA") return Component::REA;
    if (name == "IH") return Component::IH;
    throw ConfigError("unknown component name: " + std::string(name));
}

std::string_view component_label(Level l) {
    switch (l) {
        case Level::Low: return "Low";
        case Level::Mod: return "Mod";
        default: return "High";
    }
}

std::string_view wisdom_label(Level l) {
    switch (l) {
        case Level::Low: return "Low";
        case Level::Mod: return "Moderate";
        default: return "High";
    }
}

Level level_from_string(std::string_view name) {
    if (name == "Low" || name == "low") return Level::Low;
    if (name == "Mod" || name == "mod" || name == "Moderate" || name == "moderate") return Level::Mod;
    if (name == "High" || name == "high") return Level::High;
    throw ConfigError("unknown level name: " + std::string(name));
}

namespace {

std::size_t expected_breakpoints(MembershipFunction::Kind kind) {
    switch (kind) {
        case MembershipFunction::Kind::Triangular: return 3;
        case MembershipFunction::Kind::Trapezoidal: return 4;
        default: return 2; // both shoulders
    }
}

} // namespace

MembershipFunction::MembershipFunction(Kind kind, std::vector<double> breakpoints)
    : kind_(kind), breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.size() != expected_breakpoints(kind_)) {
        throw ConfigError("membership function has wrong breakpoint count");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        double b = breakpoints_[i];
        if (!std::isfinite(b) || b < 0.0 || b > 1.0) {
            throw ConfigError("membership breakpoints must lie in [0,1]");
        }
        if (i > 0 && b < breakpoints_[i - 1]) {
            throw ConfigError("membership breakpoints must be sorted ascending");
        }
    }
}

MembershipFunction MembershipFunction::triangular(double a, double b, double c) {
    return MembershipFunction(Kind::Triangular, {a, b, c});
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c, double d) {
    return MembershipFunction(Kind::Trapezoidal, {a, b, c, d});
}

MembershipFunction MembershipFunction::left_shoulder(double plateau_end, double foot) {
    return MembershipFunction(Kind::LeftShoulder, {plateau_end, foot});
}

MembershipFunction MembershipFunction::right_shoulder(double foot, double plateau_start) {
    return MembershipFunction(Kind::RightShoulder, {foot, plateau_start});
}

double MembershipFunction::evaluate(double x) const {
    const auto& p = breakpoints_;
    switch (kind_) {
        case Kind::Triangular: {
            // Peak checked first so degenerate edges (a==b or b==c) still
            // score 1 at the apex instead of dividing zero by zero.
            if (x == p[1]) return 1.0;
            if (x <= p[0] || x >= p[2]) return 0.0;
            if (x < p[1]) return (x - p[0]) / (p[1] - p[0]);
            return (p[2] - x) / (p[2] - p[1]);
        }
        case Kind::Trapezoidal: {
            if (x >= p[1] && x <= p[2]) return 1.0;
            if (x <= p[0] || x >= p[3]) return 0.0;
            if (x < p[1]) return (x - p[0]) / (p[1] - p[0]);
            return (p[3] - x) / (p[3] - p[2]);
        }
        case Kind::LeftShoulder: {
            if (x <= p[0]) return 1.0;
            if (x >= p[1]) return 0.0;
            return (p[1] - x) / (p[1] - p[0]);
        }
        default: { // RightShoulder
            if (x >= p[1]) return 1.0;
            if (x <= p[0]) return 0.0;
            return (x - p[0]) / (p[1] - p[0]);
        }
    }
}

std::string_view to_string(MembershipFunction::Kind kind) {
    switch (kind) {
        case MembershipFunction::Kind::Triangular: return "triangular";
        case MembershipFunction::Kind::Trapezoidal: return "trapezoidal";
        case MembershipFunction::Kind::LeftShoulder: return "left-shoulder";
        default: return "right-shoulder";
    }
}

MembershipFunction::Kind mf_kind_from_string(std::string_view name) {
    if (name == "triangular") return MembershipFunction::Kind::Triangular;
    if (name == "trapezoidal") return MembershipFunction::Kind::Trapezoidal;
    if (name == "left-shoulder") return MembershipFunction::Kind::LeftShoulder;
    if (name == "right-shoulder") return MembershipFunction::Kind::RightShoulder;
    throw ConfigError("unknown membership function kind: " + std::string(name));
}

FuzzyVector::FuzzyVector(std::vector<std::string> labels, std::vector<double> degrees)
    : labels_(std::move(labels)), degrees_(std::move(degrees)) {
    if (labels_.size() != degrees_.size()) {
        throw ConfigError("fuzzy vector label/degree length mismatch");
    }
    for (double d : degrees_) {
        if (!std::isfinite(d) || d < 0.0 || d > 1.0) {
            throw ConfigError("fuzzy degrees must lie in [0,1]");
        }
    }
}

std::size_t argmax_index(const std::vector<double>& degrees) {
    if (degrees.empty()) throw InputError("argmax over an empty degree vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < degrees.size(); ++i) {
        if (degrees[i] > degrees[best]) best = i; // strict: ties keep the earlier label
    }
    return best;
}

LabeledDegree argmax_label(const FuzzyVector& v) {
    std::size_t i = argmax_index(v.degrees());
    return {v.labels()[i], v.degrees()[i]};
}

LinguisticVariable::LinguisticVariable(std::string name,
                                       std::vector<std::string> labels,
                                       std::vector<MembershipFunction> functions)
    : name_(std::move(name)), labels_(std::move(labels)), functions_(std::move(functions)) {
    if (labels_.empty() || labels_.size() != functions_.size()) {
        throw ConfigError("linguistic variable needs one function per label");
    }
}

FuzzyVector LinguisticVariable::fuzzify(double x) const {
    std::vector<double> degrees;
    degrees.reserve(functions_.size());
    for (const auto& f : functions_) degrees.push_back(f.evaluate(x));
    return FuzzyVector(labels_, std::move(degrees));
}

Level dominant_level(const LevelDegrees& d) {
    std::size_t i = argmax_index({d.low, d.mod, d.high});
    return kLevels[i];
}

} // namespace zwise

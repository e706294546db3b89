#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace zwise {

// The five transcript components scored per response.
enum class Component { PT, Ref, Pro, REA, IH };

inline constexpr std::array<Component, 5> kComponents = {
    Component::PT, Component::Ref, Component::Pro, Component::REA, Component::IH};

std::string_view to_string(Component c);
// Accepts the short names above plus "PO" as a legacy alias for Pro.
Component component_from_string(std::string_view name);

// Three-rung scale shared by component levels and the wisdom output.
// Component vectors print the labels Low/Mod/High; the wisdom side prints
// Low/Moderate/High. Ties always resolve toward the lower rung.
enum class Level { Low, Mod, High };

inline constexpr std::array<Level, 3> kLevels = {Level::Low, Level::Mod, Level::High};

std::string_view component_label(Level l); // "Low" / "Mod" / "High"
std::string_view wisdom_label(Level l);    // "Low" / "Moderate" / "High"
Level level_from_string(std::string_view name); // accepts either spelling

// Piecewise-linear membership function over [0,1]. Four shapes cover every
// function in the system; all of them evaluate through the same linear
// interpolation, so continuity only depends on the breakpoints.
//
//   triangular(a,b,c)        0 at a, 1 at b, 0 at c
//   trapezoidal(a,b,c,d)     0 at a, 1 on [b,c], 0 at d
//   left_shoulder(p,f)       1 on [0,p], falls to 0 at f
//   right_shoulder(f,p)      0 up to f, rises to 1 at p, 1 afterwards
class MembershipFunction {
public:
    enum class Kind { Triangular, Trapezoidal, LeftShoulder, RightShoulder };

    static MembershipFunction triangular(double a, double b, double c);
    static MembershipFunction trapezoidal(double a, double b, double c, double d);
    static MembershipFunction left_shoulder(double plateau_end, double foot);
    static MembershipFunction right_shoulder(double foot, double plateau_start);

    // Pure; never throws. Returns a degree in [0,1] for any finite x.
    double evaluate(double x) const;

    Kind kind() const { return kind_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

private:
    MembershipFunction(Kind kind, std::vector<double> breakpoints);

    Kind kind_;
    std::vector<double> breakpoints_;
};

std::string_view to_string(MembershipFunction::Kind kind);
MembershipFunction::Kind mf_kind_from_string(std::string_view name);

// Degrees over an ordered label set. Label order is the tie-break order.
class FuzzyVector {
public:
    FuzzyVector(std::vector<std::string> labels, std::vector<double> degrees);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& degrees() const { return degrees_; }
    std::size_t size() const { return degrees_.size(); }
    double degree(std::size_t i) const { return degrees_[i]; }

private:
    std::vector<std::string> labels_;
    std::vector<double> degrees_;
};

// Index of the maximal degree; exact ties go to the earliest label.
// Throws InputError on an empty vector.
std::size_t argmax_index(const std::vector<double>& degrees);

struct LabeledDegree {
    std::string label;
    double degree;
};

LabeledDegree argmax_label(const FuzzyVector& v);

// Named collection of labels and membership functions over a shared domain.
class LinguisticVariable {
public:
    LinguisticVariable(std::string name,
                       std::vector<std::string> labels,
                       std::vector<MembershipFunction> functions);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<MembershipFunction>& functions() const { return functions_; }

    FuzzyVector fuzzify(double x) const;

private:
    std::string name_;
    std::vector<std::string> labels_;
    std::vector<MembershipFunction> functions_;
};

// Low/Mod/High degrees for one component, the working currency of the rule
// engine. Kept as a plain struct so the engine and its test oracles can share
// inputs without conversions.
struct LevelDegrees {
    double low = 0.0;
    double mod = 0.0;
    double high = 0.0;

    double at(Level l) const {
        switch (l) {
            case Level::Low: return low;
            case Level::Mod: return mod;
            default: return high;
        }
    }
};

// Dominant level with the shared lower-rung tie-break.
Level dominant_level(const LevelDegrees& d);

// Assessment result: a wisdom score with its linguistic label, paired with
// the participant's normalized confidence and its label.
struct ZNumber {
    double a_score = 0.0;
    std::string a_label;
    double b_score = 0.0;
    std::string b_label;
};

} // namespace zwise

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "zwise/fuzzy.hpp"

namespace zwise {

// Low/Mod/High degrees for all five components, in kComponents order. The
// working input of the rule engine.
using ComponentDegrees = std::array<LevelDegrees, 5>;

inline LevelDegrees& degrees_of(ComponentDegrees& d, Component c) {
    return d[static_cast<std::size_t>(c)];
}
inline const LevelDegrees& degrees_of(const ComponentDegrees& d, Component c) {
    return d[static_cast<std::size_t>(c)];
}

struct Atom {
    Component component = Component::PT;
    Level level = Level::Low;
    bool operator==(const Atom&) const = default;
};

// Antecedent expression tree. Beyond atoms and min/max connectives there are
// four aggregate forms the rule table needs:
//   at_least_k_of   k-th largest degree among the atoms, zero below cutoff
//   exactly_one_low crisp "exactly one member is dominantly low" with fuzzy
//                   strength min(low member's low, min of others' max(mod,high))
//   all_equal       min of one level's degree across all five components
//   none_at_level   crisp gate: 1 unless some component reaches cutoff at the
//                   level (the "AND no mu_low >= 0.5" guard)
struct Antecedent {
    enum class Kind { Atom, And, Or, AtLeastKOf, ExactlyOneLowOf, AllEqual, NoneAtLevel };

    static Antecedent atom(Component c, Level l);
    static Antecedent all_of(std::vector<Antecedent> children);
    static Antecedent any_of(std::vector<Antecedent> children);
    static Antecedent at_least_k_of(std::size_t k, std::vector<Atom> atoms, double cutoff = 0.5);
    static Antecedent exactly_one_low_of(std::vector<Component> members);
    static Antecedent all_equal(Level level);
    static Antecedent none_at_level(Level level, double cutoff = 0.5);

    Kind kind = Kind::Atom;
    Atom leaf;                        // Atom
    std::vector<Antecedent> children; // And / Or
    std::size_t k = 0;                // AtLeastKOf
    std::vector<Atom> atoms;          // AtLeastKOf
    std::vector<Component> members;   // ExactlyOneLowOf
    Level level = Level::Low;         // AllEqual / NoneAtLevel
    double cutoff = 0.5;              // AtLeastKOf / NoneAtLevel

    bool operator==(const Antecedent&) const = default;
};

struct Rule {
    std::string id;
    // The default rule has no antecedent; it fires at a configured strength
    // when no ordinary rule reaches the 0.5 trigger.
    bool is_default = false;
    Antecedent antecedent;
    Level consequent = Level::Mod;

    bool operator==(const Rule&) const = default;
};

// Immutable, validated collection: unique ids, exactly one default rule.
class RuleBase {
public:
    explicit RuleBase(std::vector<Rule> rules);

    // The 21 shipped rules; data/rules/wisdom_rules.txt mirrors this base and
    // a test keeps the two in lockstep.
    static RuleBase builtin_default();

    static RuleBase from_file(const std::string& path);
    static RuleBase parse(std::istream& in, const std::string& origin);

    const std::vector<Rule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }

private:
    std::vector<Rule> rules_;
};

// One-line textual form of a rule, parseable by RuleBase::parse.
std::string to_text(const Rule& rule);
void write_rules(const RuleBase& base, std::ostream& out);

} // namespace zwise

#include "rule_oracle.hpp"

#include <algorithm>
#include <functional>
#include <initializer_list>

namespace oracle {
namespace {

using zwise::ComponentDegrees;
using zwise::Level;
using zwise::LevelDegrees;

// kComponents order.
constexpr std::size_t PT = 0, Ref = 1, Pro = 2, REA = 3, IH = 4;

double kth_largest(std::vector<double> v, std::size_t k) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v[k - 1];
}

double atleast(std::vector<double> degrees, std::size_t k, double cutoff = 0.5) {
    double kth = kth_largest(std::move(degrees), k);
    return kth >= cutoff ? kth : 0.0;
}

// Dominant rung, ties resolved downward.
int dominant(const LevelDegrees& d) {
    if (d.low >= d.mod && d.low >= d.high) return 0;
    if (d.mod >= d.high) return 1;
    return 2;
}

double exactly_one_low(const ComponentDegrees& in, std::initializer_list<std::size_t> members) {
    std::size_t low_count = 0;
    std::size_t low_member = 0;
    for (std::size_t m : members) {
        if (dominant(in[m]) == 0) {
            ++low_count;
            low_member = m;
        }
    }
    if (low_count != 1) return 0.0;
    double strength = in[low_member].low;
    for (std::size_t m : members) {
        if (m == low_member) continue;
        strength = std::min(strength, std::max(in[m].mod, in[m].high));
    }
    return strength;
}

// Crisp guard over all five components.
double none_low(const ComponentDegrees& in, double cutoff = 0.5) {
    for (const LevelDegrees& d : in) {
        if (d.low >= cutoff) return 0.0;
    }
    return 1.0;
}

double all_at(const ComponentDegrees& in, Level l) {
    double m = 1.0;
    for (const LevelDegrees& d : in) m = std::min(m, d.at(l));
    return m;
}

} // namespace

std::vector<double> rule_alphas(const ComponentDegrees& in, double default_strength) {
    const LevelDegrees& pt = in[PT];
    const LevelDegrees& ref = in[Ref];
    const LevelDegrees& pro = in[Pro];
    const LevelDegrees& rea = in[REA];
    const LevelDegrees& ih = in[IH];

    std::vector<double> a(21, 0.0);
    // R1: three of five high, and a high practical side (Pro or REA)
    a[0] = std::min(atleast({ih.high, pt.high, ref.high, pro.high, rea.high}, 3),
                    std::max(pro.high, rea.high));
    // R2: IH & PT & Ref all high
    a[1] = std::min({ih.high, pt.high, ref.high});
    // R3: PT & Pro & REA all high
    a[2] = std::min({pt.high, pro.high, rea.high});
    // R4: high IH with a high practical side
    a[3] = std::min(ih.high, std::max(pro.high, rea.high));
    // R5: low PT redeemed by high IH plus one other high
    a[4] = std::min({pt.low, ih.high, std::max({pro.high, rea.high, ref.high})});
    // R6: low REA, everything else high
    a[5] = std::min({rea.low, ih.high, pt.high, pro.high});
    // R7: three of five moderate, and nothing dominantly low
    a[6] = std::min(atleast({ih.mod, pt.mod, ref.mod, pro.mod, rea.mod}, 3), none_low(in));
    // R8: IH & PT & Ref all moderate
    a[7] = std::min({ih.mod, pt.mod, ref.mod});
    // R9: Pro & REA & Ref all moderate
    a[8] = std::min({pro.mod, rea.mod, ref.mod});
    // R10: one weak spot among (Pro, REA, Ref) offset by high IH or PT
    a[9] = std::min(std::max(ih.high, pt.high), exactly_one_low(in, {Pro, REA, Ref}));
    // R11: moderate PT/Pro, low REA, high Ref
    a[10] = std::min({pt.mod, pro.mod, rea.low, ref.high});
    // R12: moderate IH, high PT, moderate practical side
    a[11] = std::min({ih.mod, pt.high, std::max(pro.mod, rea.mod)});
    // R13: IH & PT & Ref all low
    a[12] = std::min({ih.low, pt.low, ref.low});
    // R14: Pro & REA & Ref all low
    a[13] = std::min({pro.low, rea.low, ref.low});
    // R15: both practical components low
    a[14] = std::min(pro.low, rea.low);
    // R16: PT & IH low
    a[15] = std::min(pt.low, ih.low);
    // R17/R18/R19: unanimity rows
    a[16] = all_at(in, Level::Low);
    a[17] = all_at(in, Level::Mod);
    a[18] = all_at(in, Level::High);
    // R20: IH & Pro low
    a[19] = std::min(ih.low, pro.low);
    // R21: default, fires only when every ordinary rule stays below 0.5
    double strongest = 0.0;
    for (std::size_t i = 0; i < 20; ++i) strongest = std::max(strongest, a[i]);
    a[20] = strongest < 0.5 ? default_strength : 0.0;
    return a;
}

std::vector<Level> rule_consequents() {
    using zwise::Level;
    return {Level::High, Level::High, Level::High, Level::High, Level::High, Level::High,
            Level::Mod,  Level::Mod,  Level::Mod,  Level::Mod,  Level::Mod,  Level::Mod,
            Level::Low,  Level::Low,  Level::Low,  Level::Low,  Level::Low,
            Level::Mod,  Level::High, Level::Low,  Level::Mod};
}

} // namespace oracle

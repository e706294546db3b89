#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "support/rule_oracle.hpp"
#include "zwise/attribute_b.hpp"
#include "zwise/errors.hpp"
#include "zwise/fis.hpp"

using Catch::Approx;
using namespace zwise;

namespace {

ComponentDegrees uniform_degrees(double low, double mod, double high) {
    ComponentDegrees d{};
    for (auto& c : d) c = {low, mod, high};
    return d;
}

ComponentDegrees random_degrees(std::mt19937& gen, bool discrete) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> steps(0, 4);
    ComponentDegrees d{};
    for (auto& c : d) {
        if (discrete) {
            c = {steps(gen) / 4.0, steps(gen) / 4.0, steps(gen) / 4.0};
        } else {
            c = {unit(gen), unit(gen), unit(gen)};
        }
    }
    return d;
}

} // namespace

TEST_CASE("output partition fixes three triangles on a validated grid", "[fis]") {
    OutputPartition p(0.1);
    REQUIRE(p.dx() == 0.1);
    REQUIRE(p.steps() == 10);
    for (std::size_t i = 0; i <= 10; ++i) {
        REQUIRE(p.grid_x(i) == static_cast<double>(i) / 10.0);
    }
    REQUIRE(p.support_range(Level::Low) == std::pair<std::size_t, std::size_t>{0, 4});
    REQUIRE(p.support_range(Level::Mod) == std::pair<std::size_t, std::size_t>{3, 7});
    REQUIRE(p.support_range(Level::High) == std::pair<std::size_t, std::size_t>{6, 10});

    REQUIRE(p.output_set(Level::Low).evaluate(0.2) == 1.0);
    REQUIRE(p.output_set(Level::Mod).evaluate(0.5) == 1.0);
    REQUIRE(p.output_set(Level::High).evaluate(0.8) == 1.0);
    REQUIRE(p.output_set(Level::Low).evaluate(0.4) == 0.0);
    REQUIRE(p.output_set(Level::Mod).evaluate(0.3) == 0.0);

    OutputPartition fine(0.01);
    REQUIRE(fine.steps() == 100);
    REQUIRE(fine.support_range(Level::Mod) == std::pair<std::size_t, std::size_t>{30, 70});

    REQUIRE_NOTHROW(OutputPartition(0.2)); // 5 steps is the floor
    REQUIRE_THROWS_AS(OutputPartition(0.25), ConfigError); // 4 steps
    REQUIRE_THROWS_AS(OutputPartition(0.15), ConfigError); // does not divide 1
    REQUIRE_THROWS_AS(OutputPartition(0.0), ConfigError);
    REQUIRE_THROWS_AS(OutputPartition(-0.1), ConfigError);
}

TEST_CASE("firing strength evaluates atoms and connectives", "[fis]") {
    ComponentDegrees in{};
    in[0] = {0.1, 0.2, 0.7}; // PT
    in[1] = {0.6, 0.3, 0.0}; // Ref
    in[2] = {0.0, 0.9, 0.1}; // Pro
    in[3] = {0.2, 0.5, 0.3}; // REA
    in[4] = {0.4, 0.4, 0.2}; // IH

    Rule atom{"a", false, Antecedent::atom(Component::Pro, Level::Mod), Level::Mod};
    REQUIRE(firing_strength(atom, in) == 0.9);

    Rule conj{"c", false,
              Antecedent::all_of({Antecedent::atom(Component::PT, Level::High),
                                  Antecedent::atom(Component::Ref, Level::Low)}),
              Level::Mod};
    REQUIRE(firing_strength(conj, in) == 0.6);

    Rule disj{"d", false,
              Antecedent::any_of({Antecedent::atom(Component::PT, Level::Low),
                                  Antecedent::atom(Component::REA, Level::Mod)}),
              Level::Mod};
    REQUIRE(firing_strength(disj, in) == 0.5);

    // k-th largest with the 0.5 cutoff.
    Rule atl{"k", false,
             Antecedent::at_least_k_of(2,
                                       {{Component::PT, Level::High},
                                        {Component::Pro, Level::Mod},
                                        {Component::REA, Level::Mod}}),
             Level::Mod};
    REQUIRE(firing_strength(atl, in) == 0.7); // degrees 0.7, 0.9, 0.5 -> 2nd largest
    Rule atl3{"k3", false,
              Antecedent::at_least_k_of(3,
                                        {{Component::PT, Level::High},
                                         {Component::Pro, Level::Mod},
                                         {Component::REA, Level::Mod}}),
              Level::Mod};
    REQUIRE(firing_strength(atl3, in) == 0.5); // 3rd largest 0.5 meets the cutoff
    Rule atlcut{"kc", false,
                Antecedent::at_least_k_of(3,
                                          {{Component::PT, Level::High},
                                           {Component::Pro, Level::Mod},
                                           {Component::REA, Level::Mod}},
                                          0.6),
                Level::Mod};
    REQUIRE(firing_strength(atlcut, in) == 0.0); // 0.5 below the raised cutoff

    Rule def{"def", true, Antecedent{}, Level::Mod};
    REQUIRE_THROWS_AS(firing_strength(def, in), InputError);
}

TEST_CASE("one-hot inputs defuzzify to the pinned anchor scores", "[fis]") {
    RuleBase rules = RuleBase::builtin_default();
    OutputPartition coarse(0.1);

    struct Case {
        double low, mod, high;
        double score;
        Level label;
    };
    for (const Case& c : {Case{1.0, 0.0, 0.0, 0.2, Level::Low},
                          Case{0.0, 1.0, 0.0, 0.5, Level::Mod},
                          Case{0.0, 0.0, 1.0, 0.8, Level::High}}) {
        auto in = uniform_degrees(c.low, c.mod, c.high);
        auto res = infer(in, rules, coarse);
        double score = defuzzify_centroid(res.grid, res.aggregated);
        INFO("one-hot level with expected score " << c.score);
        REQUIRE(score == Approx(c.score).margin(1e-12));
        REQUIRE(final_label(score, coarse) == c.label);
        // The default rule stays silent when an ordinary rule saturates.
        REQUIRE(res.alphas.back() == 0.0);

        OutputPartition fine(0.01);
        auto res2 = infer(in, rules, fine);
        REQUIRE(defuzzify_centroid(res2.grid, res2.aggregated) ==
                Approx(c.score).margin(1e-9));
    }
}

TEST_CASE("a clipped consequent aggregates as min(alpha, set)", "[fis]") {
    // One ordinary rule keeps the aggregation to a single clipped triangle.
    Rule only{"only", false, Antecedent::atom(Component::Pro, Level::High), Level::High};
    Rule def{"def", true, Antecedent{}, Level::Mod};
    RuleBase rules({only, def});
    OutputPartition p(0.1);

    ComponentDegrees in{};
    in[2].high = 0.6; // Pro
    auto res = infer(in, rules, p);
    REQUIRE(res.alphas == std::vector<double>{0.6, 0.0});

    const auto& high = p.output_set(Level::High);
    for (std::size_t i = 0; i <= 10; ++i) {
        double expected = std::min(0.6, high.evaluate(p.grid_x(i)));
        REQUIRE(res.aggregated[i] == expected);
    }
    // Symmetric clip keeps the centroid at the triangle peak.
    REQUIRE(defuzzify_centroid(res.grid, res.aggregated) == Approx(0.8).margin(1e-12));
}

TEST_CASE("the default rule fires only below the 0.5 trigger", "[fis]") {
    RuleBase rules = RuleBase::builtin_default();
    OutputPartition p(0.1);

    // Every ordinary rule peaks at 0.4 -> default on, symmetric aggregate.
    auto weak = uniform_degrees(0.3, 0.4, 0.3);
    auto res = infer(weak, rules, p);
    double maxo = *std::max_element(res.alphas.begin(), res.alphas.end() - 1);
    REQUIRE(maxo == 0.4);
    REQUIRE(res.alphas.back() == 0.5);
    REQUIRE(defuzzify_centroid(res.grid, res.aggregated) == Approx(0.5).margin(1e-12));

    // A configured default strength is echoed in the alpha slot.
    auto res2 = infer(weak, rules, p, 0.3);
    REQUIRE(res2.alphas.back() == 0.3);

    // At exactly 0.5 the trigger does not trip.
    auto edge = uniform_degrees(0.0, 0.5, 0.0);
    auto res3 = infer(edge, rules, p);
    REQUIRE(res3.alphas.back() == 0.0);

    REQUIRE_THROWS_AS(infer(weak, rules, p, 0.0), ConfigError);
    REQUIRE_THROWS_AS(infer(weak, rules, p, 1.2), ConfigError);
}

TEST_CASE("the engine matches the straight-line rule oracle exactly", "[fis]") {
    RuleBase rules = RuleBase::builtin_default();
    OutputPartition p(0.1);
    std::mt19937 gen(20260819);

    std::vector<ComponentDegrees> cases = {
        uniform_degrees(0.0, 0.0, 0.0), uniform_degrees(1.0, 1.0, 1.0),
        uniform_degrees(1.0, 0.0, 0.0), uniform_degrees(0.0, 1.0, 0.0),
        uniform_degrees(0.0, 0.0, 1.0), uniform_degrees(0.5, 0.5, 0.5),
        uniform_degrees(0.3, 0.4, 0.3)};
    for (int i = 0; i < 700; ++i) cases.push_back(random_degrees(gen, false));
    // Degrees on a 0.25 grid exercise the cutoff-equality branches.
    for (int i = 0; i < 300; ++i) cases.push_back(random_degrees(gen, true));

    for (std::size_t n = 0; n < cases.size(); ++n) {
        auto res = infer(cases[n], rules, p, 0.5);
        auto expected = oracle::rule_alphas(cases[n], 0.5);
        INFO("case " << n);
        REQUIRE(res.alphas == expected);
    }

    // And with a non-default strength.
    for (std::size_t n = 0; n < 50; ++n) {
        auto res = infer(cases[n], rules, p, 0.25);
        REQUIRE(res.alphas == oracle::rule_alphas(cases[n], 0.25));
    }
}

TEST_CASE("aggregation is the pointwise max of clipped consequents", "[fis]") {
    RuleBase rules = RuleBase::builtin_default();
    auto consequents = oracle::rule_consequents();
    OutputPartition p(0.1);
    std::mt19937 gen(555);

    for (int n = 0; n < 200; ++n) {
        auto in = random_degrees(gen, n % 2 == 0);
        auto res = infer(in, rules, p);
        for (std::size_t i = 0; i < res.grid.size(); ++i) {
            double expected = 0.0;
            for (std::size_t r = 0; r < res.alphas.size(); ++r) {
                const auto& set = p.output_set(consequents[r]);
                expected = std::max(expected,
                                    std::min(res.alphas[r], set.evaluate(res.grid[i])));
            }
            REQUIRE(res.aggregated[i] == expected);
        }
    }
}

TEST_CASE("raising one degree can lower the score across a crisp gate", "[fis]") {
    // The exactly-one-low gate in the rule table is crisp: pushing Pro's high
    // degree past its low flips the dominant level, drops the supporting rule
    // entirely, and hands the aggregate to the weaker default. The score is
    // deliberately not monotone there.
    RuleBase rules = RuleBase::builtin_default();
    OutputPartition p(0.1);

    ComponentDegrees in{};
    in[0] = {0.0, 0.2, 0.7};  // PT
    in[1] = {0.0, 0.8, 0.0};  // Ref
    in[2] = {0.55, 0.0, 0.5}; // Pro: dominantly low
    in[3] = {0.0, 0.8, 0.0};  // REA
    in[4] = {0.45, 0.0, 0.0}; // IH

    auto before = infer(in, rules, p);
    double s1 = defuzzify_centroid(before.grid, before.aggregated);
    REQUIRE(before.alphas[9] == 0.55); // the exactly-one-low rule carries it
    REQUIRE(before.alphas.back() == 0.0);

    in[2].high = 0.6; // now dominantly high; the gate count drops to zero
    auto after = infer(in, rules, p);
    double s2 = defuzzify_centroid(after.grid, after.aggregated);
    REQUIRE(after.alphas[9] == 0.0);
    REQUIRE(after.alphas.back() == 0.5); // default takes over
    REQUIRE(s2 < s1);
    REQUIRE(s1 == Approx(0.3603448275862069).margin(1e-12));
    REQUIRE(s2 == Approx(0.35789473684210527).margin(1e-12));
}

TEST_CASE("centroid defuzzification and its failure modes", "[fis]") {
    std::vector<double> grid = {0.0, 0.5, 1.0};
    REQUIRE(defuzzify_centroid(grid, std::vector<double>{0.0, 1.0, 0.0}) == 0.5);
    REQUIRE(defuzzify_centroid(grid, std::vector<double>{1.0, 1.0, 0.0}) == 0.25);
    REQUIRE_THROWS_AS(defuzzify_centroid(grid, std::vector<double>{0.0, 0.0, 0.0}),
                      DegenerateDataError);
    REQUIRE_THROWS_AS(defuzzify_centroid(grid, std::vector<double>{1.0}), InputError);
    REQUIRE_THROWS_AS(
        defuzzify_centroid(std::vector<double>{}, std::vector<double>{}), InputError);
}

TEST_CASE("final label is max-membership with the lower-label tie-break", "[fis]") {
    OutputPartition p(0.1);
    REQUIRE(final_label(0.0, p) == Level::Low);
    REQUIRE(final_label(0.2, p) == Level::Low);
    REQUIRE(final_label(0.45, p) == Level::Mod);
    REQUIRE(final_label(0.5, p) == Level::Mod);
    REQUIRE(final_label(0.8, p) == Level::High);
    REQUIRE(final_label(1.0, p) == Level::High);
    // 0.35 sits on the Low/Mod crossover; the lower label wins.
    REQUIRE(final_label(0.35, p) == Level::Low);
    REQUIRE_THROWS_AS(final_label(-0.1, p), InputError);
    REQUIRE_THROWS_AS(final_label(1.1, p), InputError);
}

TEST_CASE("one-hot projection keeps the dominant level per component", "[fis]") {
    ComponentDegrees in{};
    in[0] = {0.2, 0.7, 0.1};
    in[1] = {0.5, 0.5, 0.0}; // tie -> Low
    in[2] = {0.1, 0.2, 0.9};
    in[3] = {0.0, 0.0, 0.0}; // all zero -> Low by tie-break
    in[4] = {0.3, 0.3, 0.3}; // full tie -> Low
    auto hot = one_hot_dominant(in);
    auto expect = [&](std::size_t k, double low, double mod, double high) {
        REQUIRE(hot[k].low == low);
        REQUIRE(hot[k].mod == mod);
        REQUIRE(hot[k].high == high);
    };
    expect(0, 0.0, 1.0, 0.0);
    expect(1, 1.0, 0.0, 0.0);
    expect(2, 0.0, 0.0, 1.0);
    expect(3, 1.0, 0.0, 0.0);
    expect(4, 1.0, 0.0, 0.0);
}

TEST_CASE("z-number assembly pairs both labeled scores", "[fis]") {
    OutputPartition p(0.1);
    auto th = ConfidenceThresholds::published();
    ZNumber z = make_z_number(0.8, 0.9, p, th);
    REQUIRE(z.a_score == 0.8);
    REQUIRE(z.a_label == "High");
    REQUIRE(z.b_score == 0.9);
    REQUIRE(z.b_label == "Certainly");

    ZNumber low = make_z_number(0.2, 0.0, p, th);
    REQUIRE(low.a_label == "Low");
    REQUIRE(low.b_label == "Perhaps");
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "zwise/errors.hpp"
#include "zwise/kde.hpp"

using Catch::Approx;
using namespace zwise;

TEST_CASE("sorted quantile interpolates at q*(n-1)", "[kde]") {
    std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
    REQUIRE(quantile_sorted(v, 0.0) == 1.0);
    REQUIRE(quantile_sorted(v, 1.0) == 4.0);
    REQUIRE(quantile_sorted(v, 0.5) == Approx(2.5).margin(1e-15));
    REQUIRE(quantile_sorted(v, 0.25) == Approx(1.75).margin(1e-15));

    std::vector<double> one = {5.0};
    REQUIRE(quantile_sorted(one, 0.0) == 5.0);
    REQUIRE(quantile_sorted(one, 0.7) == 5.0);

    REQUIRE_THROWS_AS(quantile_sorted(std::vector<double>{}, 0.5), InputError);
    REQUIRE_THROWS_AS(quantile_sorted(v, -0.1), InputError);
    REQUIRE_THROWS_AS(quantile_sorted(v, 1.1), InputError);

    // Monotone in q.
    std::vector<double> data = {0.1, 0.4, 0.45, 0.7, 0.72, 0.9};
    double prev = quantile_sorted(data, 0.0);
    for (double q = 0.05; q <= 1.0; q += 0.05) {
        double cur = quantile_sorted(data, q);
        REQUIRE(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("rule-of-thumb bandwidth matches its closed form", "[kde]") {
    std::vector<double> v = {0.1, 0.2, 0.3, 0.4, 0.5};
    // sd over n-1 = sqrt(0.025); IQR = 0.4 - 0.2 = 0.2, and 0.2/1.34 wins.
    double expected = 0.9 * (0.2 / 1.34) * std::pow(5.0, -0.2);
    REQUIRE(silverman_bandwidth(v) == Approx(expected).margin(1e-12));

    // Spread term is min(sd, IQR/1.34): a zero IQR kills it even with sd > 0.
    std::vector<double> spiked = {0.1, 0.5, 0.5, 0.5, 0.5};
    REQUIRE_THROWS_AS(silverman_bandwidth(spiked), DegenerateDataError);

    REQUIRE_THROWS_AS(silverman_bandwidth(std::vector<double>{0.5, 0.5, 0.5}),
                      DegenerateDataError);
    REQUIRE_THROWS_AS(silverman_bandwidth(std::vector<double>{0.5}), InputError);
    std::vector<double> bad = {0.1, std::nan(""), 0.3};
    REQUIRE_THROWS_AS(silverman_bandwidth(bad), InputError);
}

TEST_CASE("density grid spans [0,1] inclusive", "[kde]") {
    std::vector<double> samples = {0.5};
    auto curve = kde_density(samples, 0.1, 21);
    REQUIRE(curve.grid.size() == 21);
    REQUIRE(curve.grid.front() == 0.0);
    REQUIRE(curve.grid.back() == 1.0);
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        REQUIRE(curve.grid[i] == static_cast<double>(i) / 20.0);
    }
    REQUIRE(curve.bandwidth == 0.1);
}

TEST_CASE("single-sample density matches the scaled kernel", "[kde]") {
    std::vector<double> samples = {0.5};
    // 501 points puts 0.5 exactly on the grid at index 250.
    auto curve = kde_density(samples, 0.1, 501);
    constexpr double inv_sqrt_2pi = 0.3989422804014327;
    REQUIRE(curve.grid[250] == 0.5);
    REQUIRE(curve.density[250] == Approx(inv_sqrt_2pi / 0.1).margin(1e-12));
    // One bandwidth away the kernel drops by exp(-1/2).
    REQUIRE(curve.grid[200] == 0.4);
    REQUIRE(curve.density[200] == Approx(inv_sqrt_2pi * std::exp(-0.5) / 0.1).margin(1e-12));
}

TEST_CASE("mirrored samples produce a mirrored density", "[kde]") {
    std::vector<double> samples = {0.3, 0.7};
    auto curve = kde_density(samples, 0.08, 501);
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        std::size_t j = curve.grid.size() - 1 - i;
        REQUIRE(curve.density[i] == Approx(curve.density[j]).margin(1e-12));
    }
}

TEST_CASE("density integrates to one away from the boundary", "[kde]") {
    std::vector<double> samples = {0.4, 0.5, 0.6};
    auto curve = kde_density(samples, 0.05, 512);
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < curve.grid.size(); ++i) {
        mass += 0.5 * (curve.density[i] + curve.density[i + 1]) *
                (curve.grid[i + 1] - curve.grid[i]);
    }
    REQUIRE(mass == Approx(1.0).margin(0.005));
}

TEST_CASE("density runs are bit-identical", "[kde]") {
    std::vector<double> samples = {0.12, 0.37, 0.55, 0.55, 0.81};
    auto a = kde_density(samples, 0.07, 128);
    auto b = kde_density(samples, 0.07, 128);
    for (std::size_t i = 0; i < a.density.size(); ++i) {
        REQUIRE(a.density[i] == b.density[i]);
    }
}

TEST_CASE("density estimation rejects bad inputs", "[kde]") {
    std::vector<double> ok = {0.2, 0.8};
    REQUIRE_THROWS_AS(kde_density(std::vector<double>{}, 0.1, 64), InputError);
    REQUIRE_THROWS_AS(kde_density(ok, 0.0, 64), InputError);
    REQUIRE_THROWS_AS(kde_density(ok, -0.1, 64), InputError);
    REQUIRE_THROWS_AS(kde_density(ok, std::nan(""), 64), InputError);
    REQUIRE_THROWS_AS(kde_density(ok, 0.1, 15), InputError);
    std::vector<double> bad = {0.2, std::nan("")};
    REQUIRE_THROWS_AS(kde_density(bad, 0.1, 64), InputError);
}

TEST_CASE("density curve construction is validated", "[kde]") {
    REQUIRE_THROWS_AS(DensityCurve({0.0, 0.5}, {1.0}, 0.1), ConfigError);
    REQUIRE_THROWS_AS(DensityCurve({0.0, 0.0}, {1.0, 1.0}, 0.1), ConfigError);
    REQUIRE_THROWS_AS(DensityCurve({0.0, 0.5}, {1.0, -0.1}, 0.1), ConfigError);
    REQUIRE_THROWS_AS(DensityCurve({0.0, 0.5}, {1.0, 1.0}, 0.0), ConfigError);
}

TEST_CASE("valley scan keeps only strict interior minima", "[kde]") {
    DensityCurve curve({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 0.5, 1.0, 0.2, 3.0}, 0.1);
    auto valleys = find_valleys(curve);
    REQUIRE(valleys == std::vector<double>{0.25, 0.75});

    DensityCurve plateau({0.0, 0.33, 0.66, 1.0}, {1.0, 0.5, 0.5, 1.0}, 0.1);
    REQUIRE(find_valleys(plateau).empty());

    DensityCurve monotone({0.0, 0.5, 1.0}, {3.0, 2.0, 1.0}, 0.1);
    REQUIRE(find_valleys(monotone).empty());

    DensityCurve tiny({0.0, 1.0}, {1.0, 2.0}, 0.1);
    REQUIRE_THROWS_AS(find_valleys(tiny), InputError);
}

TEST_CASE("valley count must match the taxonomy", "[kde]") {
    std::vector<double> valleys = {0.2, 0.6};
    REQUIRE(thresholds_from_valleys(valleys, 2) == valleys);
    try {
        thresholds_from_valleys(valleys, 7);
        FAIL("expected CalibrationMismatch");
    } catch (const CalibrationMismatch& e) {
        REQUIRE(e.found() == 2);
        REQUIRE(e.expected() == 7);
    }
}

TEST_CASE("well-separated clusters leave one valley between them", "[kde]") {
    std::vector<double> samples;
    for (double off : {-0.02, -0.01, 0.0, 0.01, 0.02}) {
        samples.push_back(0.25 + off);
        samples.push_back(0.75 + off);
    }
    // 513 points puts the symmetry axis 0.5 exactly on the grid.
    auto curve = kde_density(samples, 0.06, 513);
    auto valleys = find_valleys(curve);
    REQUIRE(valleys.size() == 1);
    REQUIRE(valleys[0] == Approx(0.5).margin(1e-12));
}

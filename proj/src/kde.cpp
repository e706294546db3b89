#include "zwise/kde.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "zwise/errors.hpp"

namespace zwise {

DensityCurve::DensityCurve(std::vector<double> g, std::vector<double> d, double h)
    : grid(std::move(g)), density(std::move(d)), bandwidth(h) {
    if (grid.size() != density.size() || grid.empty()) {
        throw ConfigError("density curve grid/density length mismatch");
    }
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw ConfigError("density curve bandwidth must be positive");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || (i > 0 && grid[i] <= grid[i - 1])) {
            throw ConfigError("density curve grid must be strictly increasing");
        }
        if (!std::isfinite(density[i]) || density[i] < 0.0) {
            throw ConfigError("density values must be finite and nonnegative");
        }
    }
}

double quantile_sorted(std::span<const double> v, double q) {
    if (v.empty()) throw InputError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level outside [0,1]");
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double silverman_bandwidth(std::span<const double> samples) {
    std::size_t n = samples.size();
    if (n < 2) throw InputError("bandwidth selection needs at least 2 samples");

    double mean = 0.0;
    for (double s : samples) {
        if (!std::isfinite(s)) throw InputError("non-finite sample");
        mean += s;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

    double spread = std::min(sd, iqr / 1.34);
    double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) {
        throw DegenerateDataError(
            "sample spread is zero; rule-of-thumb bandwidth undefined, pass one explicitly");
    }
    return h;
}

DensityCurve kde_density(std::span<const double> samples, double bandwidth,
                         std::size_t grid_points) {
    if (samples.empty()) throw InputError("density estimation needs at least 1 sample");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InputError("bandwidth must be positive");
    }
    if (grid_points < 16) throw InputError("grid must have at least 16 points");
    for (double s : samples) {
        if (!std::isfinite(s)) throw InputError("non-finite sample");
    }

    constexpr double inv_sqrt_2pi = 0.3989422804014327;
    const double n = static_cast<double>(samples.size());
    const std::size_t g = grid_points;

    std::vector<double> grid(g), density(g);
    for (std::size_t i = 0; i < g; ++i) {
        double x = static_cast<double>(i) / static_cast<double>(g - 1);
        double sum = 0.0;
        for (double s : samples) { // index order, keeps runs bit-identical
            double u = (x - s) / bandwidth;
            sum += std::exp(-0.5 * u * u);
        }
        grid[i] = x;
        density[i] = inv_sqrt_2pi * sum / (n * bandwidth);
    }
    return DensityCurve(std::move(grid), std::move(density), bandwidth);
}

std::vector<double> find_valleys(const DensityCurve& curve) {
    if (curve.grid.size() < 3) throw InputError("valley scan needs at least 3 grid points");
    std::vector<double> valleys;
    for (std::size_t i = 1; i + 1 < curve.grid.size(); ++i) {
        if (curve.density[i] < curve.density[i - 1] && curve.density[i] < curve.density[i + 1]) {
            valleys.push_back(curve.grid[i]);
        }
    }
    return valleys;
}

std::vector<double> thresholds_from_valleys(const std::vector<double>& valleys,
                                            std::size_t expected_count) {
    if (valleys.size() != expected_count) {
        throw CalibrationMismatch(
            valleys.size(), expected_count,
            "calibration found " + std::to_string(valleys.size()) + " valleys, taxonomy needs " +
                std::to_string(expected_count));
    }
    return valleys;
}

void write_csv(const DensityCurve& curve, std::ostream& out) {
    out << "x,density\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", curve.grid[i], curve.density[i]);
        out << buf;
    }
}

} // namespace zwise

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace zwise {

// Gaussian kernel density estimate sampled on a uniform grid over [0,1].
// No boundary correction: scores are already normalized to the unit
// interval, so mass leaking past the edges is small and tolerated.
struct DensityCurve {
    std::vector<double> grid;    // strictly increasing
    std::vector<double> density; // same length, nonnegative
    double bandwidth = 0.0;

    DensityCurve(std::vector<double> grid, std::vector<double> density, double bandwidth);
};

// Quantile of ascending-sorted values, interpolating linearly at position
// q*(n-1). This is the one quantile convention in the codebase; the IQR below
// and the bootstrap percentile extraction both route through it.
double quantile_sorted(std::span<const double> sorted_values, double q);

// Silverman's rule of thumb: h = 0.9 * min(sd, IQR/1.34) * n^(-1/5), with the
// n-1 standard deviation. Data whose spread term is zero has no usable rule
// of thumb; callers must then supply a bandwidth explicitly.
double silverman_bandwidth(std::span<const double> samples);

// f(x) = (1/(n*h)) * sum_j K((x - x_j)/h), K the standard normal kernel,
// evaluated on grid_points uniformly spaced abscissae from 0 to 1 inclusive.
// Samples are summed in index order so results are bit-reproducible.
DensityCurve kde_density(std::span<const double> samples, double bandwidth,
                         std::size_t grid_points = 512);

// Abscissae of strict interior local minima, ascending. A point qualifies
// only when strictly below both neighbors, so plateaus and endpoints never
// produce valleys.
std::vector<double> find_valleys(const DensityCurve& curve);

// Valley positions double as category boundaries. The taxonomy dictates how
// many boundaries there must be; any other count is a calibration mismatch.
std::vector<double> thresholds_from_valleys(const std::vector<double>& valleys,
                                            std::size_t expected_count);

// Two-column CSV (x,density), one row per grid point.
void write_csv(const DensityCurve& curve, std::ostream& out);

} // namespace zwise

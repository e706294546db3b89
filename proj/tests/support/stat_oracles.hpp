#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zwise/stats.hpp"

namespace oracle {

// Reference statistics written independently of src/stats.cpp: quadratic
// rank assignment, pair-counting U, closed-form tie corrections, and exact
// p-values by recursive enumeration (subsets / index permutations / capacity
// assignment) instead of std::next_permutation over multisets. Where both
// sides enumerate the same finite family the hit fractions must agree.

// rank_i = #smaller + (#equal incl. self + 1)/2, one-based.
std::vector<double> mid_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of the mid-ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Two-sided p via t = rho*sqrt((n-2)/(1-rho^2)) on n-2 df; 0 at |rho| = 1.
double spearman_p_asymptotic(double rho, std::size_t n);

// Full n! enumeration of index permutations (use n <= 7). Ties inflate hit
// and total counts by the same multiplicity, so the fraction matches a
// distinct-arrangement enumeration exactly.
double spearman_p_exact(std::span<const double> x, std::span<const double> y);

// U of a versus b counted pair by pair: [a > b] + 0.5*[a == b].
double mwu_u_pairs(std::span<const double> a, std::span<const double> b);

struct ZP {
    double z = 0.0;
    double p = 1.0;
};

// Tie-corrected normal approximation with the 0.5 continuity correction,
// restated from the documented formulas.
ZP mwu_asymptotic(std::span<const double> a, std::span<const double> b);

// Exact two-sided p over all C(N, n_a) subsets of pooled positions.
double mwu_p_exact(std::span<const double> a, std::span<const double> b);

// H via the centered form 12/(N(N+1)) * sum n_i (rbar_i - (N+1)/2)^2, then
// the tie divisor 1 - sum(t^3 - t)/(N^3 - N).
double kw_h(const std::vector<std::vector<double>>& groups);

double kw_p_asymptotic(double h, std::size_t df);

// Exact p with ranks and tie divisor held fixed, enumerating every
// assignment of pooled positions to groups under the size capacities.
double kw_p_exact(const std::vector<std::vector<double>>& groups);

// Benjamini-Hochberg step-up by definition, input order preserved.
std::vector<double> fdr_stepup(std::span<const double> pvalues);

// Re-implementation of the documented counter-mode SplitMix64 contract.
class SplitMixRef {
public:
    explicit SplitMixRef(std::uint64_t state) : state_(state) {}
    static SplitMixRef stream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next();
    double next_double();
    std::size_t next_index(std::size_t n);

private:
    std::uint64_t state_;
};

struct PercentileCI {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t skipped = 0;
    bool degenerate = false;
};

// Paired percentile bootstrap on the same per-resample streams; the library's
// force_zero_bias_accel interval must reproduce these endpoints.
PercentileCI percentile_bootstrap(std::span<const double> x, std::span<const double> y,
                                  const zwise::PairedStatistic& statistic,
                                  std::size_t resamples, double level, std::uint64_t seed);

} // namespace oracle

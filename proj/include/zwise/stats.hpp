#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zwise {

// Average 1-based ranks; tied values share their mid-rank.
std::vector<double> mid_ranks(std::span<const double> values);

// Asymptotic p-values (t / normal / chi-square) are the default. Exact mode
// enumerates group assignments; it is only feasible for n <= 10 per group
// (and a bounded number of assignments overall) and exists mostly as a
// cross-check for the approximations.
enum class PValueMode { Asymptotic, Exact };

struct SpearmanResult {
    double rho = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// Pearson correlation of mid-ranks; two-tailed p via t = rho*sqrt((n-2)/(1-rho^2))
// on n-2 degrees of freedom, p = 0 when |rho| = 1. Zero variance in either
// variable leaves the correlation undefined (DegenerateDataError).
SpearmanResult spearman_rho(std::span<const double> x, std::span<const double> y,
                            PValueMode mode = PValueMode::Asymptotic);

struct MannWhitneyResult {
    double u = 0.0;   // min(u_a, u_b), the reported statistic
    double u_a = 0.0; // first group's U; the Z numerator uses this one so
    double u_b = 0.0; // swapping groups negates Z instead of fixing its sign
    double z = 0.0;
    double p = 1.0;
    double mean_rank_a = 0.0;
    double mean_rank_b = 0.0;
};

// Mid-ranks over the pooled sample; normal approximation with tie-corrected
// variance and a 0.5 continuity correction toward the null.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 PValueMode mode = PValueMode::Asymptotic);

struct KruskalWallisResult {
    double h = 0.0;
    std::size_t df = 0;
    double p = 1.0;
    std::vector<double> mean_ranks;
    bool degenerate = false; // every pooled observation identical; H pinned to 0
};

// H with the tie-correction divisor 1 - sum(t^3-t)/(N^3-N); chi-square upper
// tail on groups-1 degrees of freedom.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                   PValueMode mode = PValueMode::Asymptotic);

// Benjamini-Hochberg step-up, returned in input order.
std::vector<double> fdr_adjust(std::span<const double> pvalues);

// Statistic evaluated on one paired resample. Returning nullopt means the
// statistic is undefined there (say, a zero-variance resample for rho); such
// resamples are skipped and counted.
using PairedStatistic =
    std::function<std::optional<double>(std::span<const double>, std::span<const double>)>;

// Ready-made statistic for the battery: Spearman rho, undefined on
// zero-variance resamples.
PairedStatistic spearman_statistic();

struct BootstrapOptions {
    std::size_t resamples = 10000;
    double level = 0.95;
    std::uint64_t seed = 0;
    // Test hook: pins z0 = a = 0, which reduces BCa to plain percentile
    // endpoints. Never set outside verification code.
    bool force_zero_bias_accel = false;
};

struct BootstrapResult {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t skipped = 0; // resamples where the statistic was undefined
    bool degenerate = false; // resample distribution collapsed to one value
};

// Paired bootstrap with BCa endpoints: bias correction z0 from the fraction
// of resample statistics strictly below the point estimate, acceleration from
// jackknife skewness. Resample b draws its indices from
// SplitMix64::stream(seed, b), making runs bit-identical for a fixed seed.
// Needs n >= 8; below that the jackknife acceleration is too unstable.
BootstrapResult bootstrap_bca_ci(std::span<const double> x, std::span<const double> y,
                                 const PairedStatistic& statistic,
                                 const BootstrapOptions& options = {});

// One row of the validity report (per external measure).
struct TestReport {
    std::string measure;
    std::size_t n = 0;
    double rho = 0.0;
    double p = 1.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double p_adjusted = 1.0;
    std::size_t bootstrap_skipped = 0;
    bool ci_degenerate = false;
};

} // namespace zwise

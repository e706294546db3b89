#include "zwise/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "zwise/errors.hpp"
#include "zwise/kde.hpp"
#include "zwise/rng.hpp"

namespace zwise {

namespace {

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw InputError(std::string(what) + " contains non-finite values");
    }
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
    boost::math::normal_distribution<double> n01;
    return boost::math::quantile(n01, p);
}

double student_t_sf(double t, double df) {
    boost::math::students_t_distribution<double> dist(df);
    return boost::math::cdf(boost::math::complement(dist, t));
}

double chi_squared_sf(double x, double df) {
    boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

// Sum of (t^3 - t) over tie groups of the pooled values.
double tie_term(std::span<const double> pooled) {
    std::vector<double> sorted(pooled.begin(), pooled.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        double t = static_cast<double>(j - i);
        sum += t * t * t - t;
        i = j;
    }
    return sum;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    std::size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) {
        throw DegenerateDataError("zero variance: correlation undefined");
    }
    return cov / std::sqrt(va * vb);
}

// Number of distinct arrangements of a label multiset, the size of every
// exact-enumeration run. Guarded so exact mode stays an oracle, not a DoS.
constexpr double kMaxEnumeration = 5e6;

double multinomial_count(const std::vector<std::size_t>& sizes) {
    double total = 0.0;
    double log_count = 0.0;
    for (std::size_t s : sizes) total += static_cast<double>(s);
    log_count = std::lgamma(total + 1.0);
    for (std::size_t s : sizes) log_count -= std::lgamma(static_cast<double>(s) + 1.0);
    return std::exp(log_count);
}

void check_exact_feasible(const std::vector<std::size_t>& sizes) {
    for (std::size_t s : sizes) {
        if (s > 10) throw InputError("exact mode supports at most 10 observations per group");
    }
    if (multinomial_count(sizes) > kMaxEnumeration) {
        throw InputError("exact mode infeasible: too many group assignments to enumerate");
    }
}

double spearman_exact_p(std::span<const double> x, std::span<const double> y) {
    check_exact_feasible({x.size()});
    std::vector<double> rx = mid_ranks(x);
    std::vector<double> ry = mid_ranks(y);
    double observed = std::abs(pearson(rx, ry));

    // Every distinct arrangement of the rank multiset stands for the same
    // number of raw permutations, so enumerating arrangements is exact.
    std::vector<double> perm = ry;
    std::sort(perm.begin(), perm.end());
    std::size_t hits = 0, total = 0;
    do {
        ++total;
        if (std::abs(pearson(rx, perm)) >= observed - 1e-12) ++hits;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

double rank_sum_for_label(const std::vector<double>& ranks, const std::vector<int>& labels,
                          int label) {
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) sum += ranks[i];
    }
    return sum;
}

double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b) {
    check_exact_feasible({a.size(), b.size()});
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = mid_ranks(pooled);

    double m = static_cast<double>(a.size());
    double n = static_cast<double>(b.size());
    double offset = m * (m + 1.0) / 2.0;
    double mid = m * n / 2.0;
    double r_a = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r_a += ranks[i];
    double observed = std::abs(r_a - offset - mid);

    std::vector<int> labels(pooled.size(), 1);
    std::fill(labels.begin(), labels.begin() + static_cast<long>(a.size()), 0);
    std::sort(labels.begin(), labels.end());
    std::size_t hits = 0, total = 0;
    do {
        ++total;
        double u = rank_sum_for_label(ranks, labels, 0) - offset;
        if (std::abs(u - mid) >= observed - 1e-12) ++hits;
    } while (std::next_permutation(labels.begin(), labels.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

double kw_h_from_rank_sums(const std::vector<double>& rank_sums,
                           const std::vector<std::size_t>& sizes, double n_total,
                           double tie_factor) {
    double s = 0.0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        double mean_rank = rank_sums[g] / static_cast<double>(sizes[g]);
        s += static_cast<double>(sizes[g]) * mean_rank * mean_rank;
    }
    double h = 12.0 / (n_total * (n_total + 1.0)) * s - 3.0 * (n_total + 1.0);
    if (h < 0.0 && h > -1e-9) h = 0.0; // float dust on rank-flat data
    return h / tie_factor;
}

double kruskal_wallis_exact_p(const std::vector<std::vector<double>>& groups, double h_observed,
                              double tie_factor) {
    std::vector<std::size_t> sizes;
    std::vector<double> pooled;
    std::vector<int> labels;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        sizes.push_back(groups[g].size());
        for (double v : groups[g]) {
            pooled.push_back(v);
            labels.push_back(static_cast<int>(g));
        }
    }
    check_exact_feasible(sizes);
    std::vector<double> ranks = mid_ranks(pooled);
    double n_total = static_cast<double>(pooled.size());

    std::sort(labels.begin(), labels.end());
    std::size_t hits = 0, total = 0;
    std::vector<double> rank_sums(groups.size());
    do {
        ++total;
        std::fill(rank_sums.begin(), rank_sums.end(), 0.0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            rank_sums[static_cast<std::size_t>(labels[i])] += ranks[i];
        }
        if (kw_h_from_rank_sums(rank_sums, sizes, n_total, tie_factor) >= h_observed - 1e-12) {
            ++hits;
        }
    } while (std::next_permutation(labels.begin(), labels.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

} // namespace

std::vector<double> mid_ranks(std::span<const double> values) {
    require_finite(values, "rank input");
    std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mid;
        i = j;
    }
    return ranks;
}

SpearmanResult spearman_rho(std::span<const double> x, std::span<const double> y,
                            PValueMode mode) {
    if (x.size() != y.size()) throw InputError("paired sample lengths differ");
    if (x.size() < 3) throw InputError("correlation needs at least 3 pairs");
    require_finite(x, "x");
    require_finite(y, "y");

    double rho = pearson(mid_ranks(x), mid_ranks(y));
    SpearmanResult result;
    result.rho = rho;
    result.n = x.size();

    if (mode == PValueMode::Exact) {
        result.p = spearman_exact_p(x, y);
        return result;
    }
    if (std::abs(rho) >= 1.0) {
        result.p = 0.0;
        return result;
    }
    double n = static_cast<double>(x.size());
    double t = rho * std::sqrt((n - 2.0) / (1.0 - rho * rho));
    result.p = std::min(1.0, 2.0 * student_t_sf(std::abs(t), n - 2.0));
    return result;
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 PValueMode mode) {
    if (a.empty() || b.empty()) throw InputError("both groups must be non-empty");
    require_finite(a, "group a");
    require_finite(b, "group b");

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = mid_ranks(pooled);

    double m = static_cast<double>(a.size());
    double n = static_cast<double>(b.size());
    double big_n = m + n;
    double r_a = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r_a += ranks[i];
    double r_b = (big_n * (big_n + 1.0) / 2.0) - r_a;

    MannWhitneyResult result;
    result.u_a = r_a - m * (m + 1.0) / 2.0;
    result.u_b = m * n - result.u_a;
    result.u = std::min(result.u_a, result.u_b);
    result.mean_rank_a = r_a / m;
    result.mean_rank_b = r_b / n;

    double variance =
        m * n / 12.0 * ((big_n + 1.0) - tie_term(pooled) / (big_n * (big_n - 1.0)));
    if (variance <= 0.0) {
        // Every pooled observation identical: no evidence either way.
        result.z = 0.0;
        result.p = 1.0;
        return result;
    }

    double d = result.u_a - m * n / 2.0;
    // Continuity correction: shrink toward the null by half a unit.
    if (d > 0.5) {
        d -= 0.5;
    } else if (d < -0.5) {
        d += 0.5;
    } else {
        d = 0.0;
    }
    result.z = d / std::sqrt(variance);
    result.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(result.z))));

    if (mode == PValueMode::Exact) result.p = mann_whitney_exact_p(a, b);
    return result;
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                   PValueMode mode) {
    if (groups.size() < 2) throw InputError("need at least 2 groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw InputError("empty group");
        require_finite(g, "group");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    std::vector<double> ranks = mid_ranks(pooled);
    double n_total = static_cast<double>(pooled.size());

    KruskalWallisResult result;
    result.df = groups.size() - 1;

    std::vector<double> rank_sums(groups.size(), 0.0);
    std::vector<std::size_t> sizes(groups.size());
    std::size_t offset = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        sizes[g] = groups[g].size();
        for (std::size_t i = 0; i < groups[g].size(); ++i) rank_sums[g] += ranks[offset + i];
        offset += groups[g].size();
        result.mean_ranks.push_back(rank_sums[g] / static_cast<double>(groups[g].size()));
    }

    double tie_factor = 1.0 - tie_term(pooled) / (n_total * n_total * n_total - n_total);
    if (tie_factor <= 0.0) {
        // All observations identical; the statistic carries no information.
        result.h = 0.0;
        result.p = 1.0;
        result.degenerate = true;
        return result;
    }

    result.h = kw_h_from_rank_sums(rank_sums, sizes, n_total, tie_factor);
    result.p = std::min(1.0, chi_squared_sf(result.h, static_cast<double>(result.df)));
    if (mode == PValueMode::Exact) {
        result.p = kruskal_wallis_exact_p(groups, result.h, tie_factor);
    }
    return result;
}

std::vector<double> fdr_adjust(std::span<const double> pvalues) {
    for (double p : pvalues) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw InputError("p-value outside [0,1]");
    }
    std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        double candidate =
            static_cast<double>(m) * pvalues[order[i]] / static_cast<double>(i + 1);
        running = std::min(running, std::min(candidate, 1.0));
        adjusted[order[i]] = running;
    }
    return adjusted;
}

PairedStatistic spearman_statistic() {
    return [](std::span<const double> x, std::span<const double> y) -> std::optional<double> {
        try {
            return spearman_rho(x, y).rho;
        } catch (const DegenerateDataError&) {
            return std::nullopt;
        }
    };
}

BootstrapResult bootstrap_bca_ci(std::span<const double> x, std::span<const double> y,
                                 const PairedStatistic& statistic,
                                 const BootstrapOptions& options) {
    if (x.size() != y.size()) throw InputError("paired sample lengths differ");
    std::size_t n = x.size();
    if (n < 8) throw InputError("BCa bootstrap needs at least 8 pairs");
    require_finite(x, "x");
    require_finite(y, "y");
    if (options.resamples < 2) throw InputError("need at least 2 resamples");
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw InputError("confidence level outside (0,1)");
    }

    std::optional<double> point = statistic(x, y);
    if (!point) throw DegenerateDataError("statistic undefined on the original sample");
    double theta_hat = *point;

    std::vector<double> thetas;
    thetas.reserve(options.resamples);
    std::size_t skipped = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t b = 0; b < options.resamples; ++b) {
        SplitMix64 rng = SplitMix64::stream(options.seed, b);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t idx = rng.next_index(n);
            xs[j] = x[idx];
            ys[j] = y[idx];
        }
        std::optional<double> theta = statistic(xs, ys);
        if (theta) {
            thetas.push_back(*theta);
        } else {
            ++skipped;
        }
    }
    if (thetas.empty()) {
        throw DegenerateDataError("statistic undefined on every resample");
    }
    std::sort(thetas.begin(), thetas.end());

    BootstrapResult result;
    result.skipped = skipped;
    if (thetas.front() == thetas.back()) {
        result.lo = result.hi = thetas.front();
        result.degenerate = true;
        return result;
    }

    double z0 = 0.0, accel = 0.0;
    double count = static_cast<double>(thetas.size());
    if (!options.force_zero_bias_accel) {
        double below = static_cast<double>(
            std::count_if(thetas.begin(), thetas.end(), [&](double t) { return t < theta_hat; }));
        // Keep the fraction off the hard 0/1 walls by half a resample weight.
        double frac = std::clamp(below / count, 0.5 / count, 1.0 - 0.5 / count);
        z0 = normal_quantile(frac);

        std::vector<double> jack;
        jack.reserve(n);
        std::vector<double> xj(n - 1), yj(n - 1);
        for (std::size_t leave = 0; leave < n; ++leave) {
            std::size_t w = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == leave) continue;
                xj[w] = x[i];
                yj[w] = y[i];
                ++w;
            }
            std::optional<double> theta = statistic(xj, yj);
            if (theta) jack.push_back(*theta);
        }
        if (jack.size() >= 3) {
            double mean = std::accumulate(jack.begin(), jack.end(), 0.0) /
                          static_cast<double>(jack.size());
            double s2 = 0.0, s3 = 0.0;
            for (double t : jack) {
                double d = mean - t;
                s2 += d * d;
                s3 += d * d * d;
            }
            if (s2 > 0.0) accel = s3 / (6.0 * std::pow(s2, 1.5));
        }
    }

    double alpha = 1.0 - options.level;
    auto adjusted_level = [&](double z_alpha) {
        double num = z0 + z_alpha;
        double denom = 1.0 - accel * num;
        double w = denom > 0.0 ? z0 + num / denom
                               : std::copysign(std::numeric_limits<double>::infinity(), num);
        return normal_cdf(w);
    };
    double a1 = adjusted_level(normal_quantile(alpha / 2.0));
    double a2 = adjusted_level(normal_quantile(1.0 - alpha / 2.0));
    result.lo = quantile_sorted(thetas, std::clamp(a1, 0.0, 1.0));
    result.hi = quantile_sorted(thetas, std::clamp(a2, 0.0, 1.0));
    if (result.lo > result.hi) std::swap(result.lo, result.hi);
    return result;
}

} // namespace zwise

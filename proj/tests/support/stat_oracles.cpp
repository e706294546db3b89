#include "stat_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace oracle {
namespace {

constexpr double kSlack = 1e-12; // enumeration hit threshold slack

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Upper normal tail via erfc; independent of the boost normal used in src.
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// sum over pooled tie groups of t^3 - t.
double tie_term(std::span<const double> pooled) {
    std::map<double, std::size_t> counts;
    for (double v : pooled) ++counts[v];
    double s = 0.0;
    for (const auto& [value, t] : counts) {
        (void)value;
        double td = static_cast<double>(t);
        s += td * td * td - td;
    }
    return s;
}

} // namespace

std::vector<double> mid_ranks(std::span<const double> v) {
    std::vector<double> r(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t smaller = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++smaller;
            else if (v[j] == v[i]) ++equal;
        }
        r[i] = static_cast<double>(smaller) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    std::vector<double> rx = mid_ranks(x), ry = mid_ranks(y);
    return pearson(rx, ry);
}

double spearman_p_asymptotic(double rho, std::size_t n) {
    if (std::abs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double spearman_p_exact(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> rx = mid_ranks(x), ry = mid_ranks(y);
    const double observed = std::abs(pearson(rx, ry));
    std::vector<double> perm(n, 0.0);
    std::vector<bool> used(n, false);
    std::uint64_t hits = 0, total = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == n) {
            ++total;
            if (std::abs(pearson(rx, perm)) >= observed - kSlack) ++hits;
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = true;
            perm[pos] = ry[i];
            rec(pos + 1);
            used[i] = false;
        }
    };
    rec(0);
    return static_cast<double>(hits) / static_cast<double>(total);
}

double mwu_u_pairs(std::span<const double> a, std::span<const double> b) {
    double u = 0.0;
    for (double va : a) {
        for (double vb : b) {
            if (va > vb) u += 1.0;
            else if (va == vb) u += 0.5;
        }
    }
    return u;
}

ZP mwu_asymptotic(std::span<const double> a, std::span<const double> b) {
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    const double N = m + n;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const double u_a = mwu_u_pairs(a, b);
    const double mid = m * n / 2.0;
    const double variance = m * n / 12.0 * ((N + 1.0) - tie_term(pooled) / (N * (N - 1.0)));
    if (variance <= 0.0) return {0.0, 1.0};
    double d = u_a - mid;
    if (d > 0.5) d -= 0.5;
    else if (d < -0.5) d += 0.5;
    else d = 0.0;
    const double z = d / std::sqrt(variance);
    return {z, std::min(1.0, 2.0 * normal_sf(std::abs(z)))};
}

double mwu_p_exact(std::span<const double> a, std::span<const double> b) {
    const std::size_t na = a.size(), N = na + b.size();
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = mid_ranks(pooled);
    const double offset = static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
    const double mid = static_cast<double>(na) * static_cast<double>(b.size()) / 2.0;
    double r_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) r_a += ranks[i];
    const double observed = std::abs(r_a - offset - mid);
    std::uint64_t hits = 0, total = 0;
    std::size_t taken = 0;
    std::function<void(std::size_t, double)> rec = [&](std::size_t start, double sum) {
        if (taken == na) {
            ++total;
            if (std::abs(sum - offset - mid) >= observed - kSlack) ++hits;
            return;
        }
        for (std::size_t i = start; i + (na - taken) <= N; ++i) {
            ++taken;
            rec(i + 1, sum + ranks[i]);
            --taken;
        }
    };
    rec(0, 0.0);
    return static_cast<double>(hits) / static_cast<double>(total);
}

namespace {

// H from per-group rank sums with a precomputed tie divisor. Mirrors the
// engine's evaluation order so enumeration hit decisions agree bitwise.
double h_from_rank_sums(const std::vector<double>& rank_sums,
                        const std::vector<std::size_t>& sizes, double N, double divisor) {
    double s = 0.0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        double mean_rank = rank_sums[g] / static_cast<double>(sizes[g]);
        s += static_cast<double>(sizes[g]) * mean_rank * mean_rank;
    }
    double h = 12.0 / (N * (N + 1.0)) * s - 3.0 * (N + 1.0);
    if (h < 0.0 && h > -1e-9) h = 0.0;
    return h / divisor;
}

} // namespace

double kw_h(const std::vector<std::vector<double>>& groups) {
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    const double N = static_cast<double>(pooled.size());
    std::vector<double> ranks = mid_ranks(pooled);
    double h = 0.0;
    std::size_t pos = 0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) sum += ranks[pos + i];
        pos += g.size();
        const double rbar = sum / static_cast<double>(g.size());
        const double dev = rbar - (N + 1.0) / 2.0;
        h += static_cast<double>(g.size()) * dev * dev;
    }
    h *= 12.0 / (N * (N + 1.0));
    const double divisor = 1.0 - tie_term(pooled) / (N * N * N - N);
    return h / divisor;
}

double kw_p_asymptotic(double h, std::size_t df) {
    boost::math::chi_squared dist(static_cast<double>(df));
    return boost::math::cdf(boost::math::complement(dist, h));
}

double kw_p_exact(const std::vector<std::vector<double>>& groups) {
    std::vector<double> pooled;
    std::vector<std::size_t> sizes;
    for (const auto& g : groups) {
        sizes.push_back(g.size());
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const std::size_t Ns = pooled.size();
    const double N = static_cast<double>(Ns);
    std::vector<double> ranks = mid_ranks(pooled);
    const double divisor = 1.0 - tie_term(pooled) / (N * N * N - N);

    std::vector<double> rank_sums(sizes.size(), 0.0);
    std::size_t pos = 0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        for (std::size_t i = 0; i < sizes[g]; ++i) rank_sums[g] += ranks[pos + i];
        pos += sizes[g];
    }
    const double h_obs = h_from_rank_sums(rank_sums, sizes, N, divisor);

    std::vector<std::size_t> cap = sizes;
    std::vector<double> sums(sizes.size(), 0.0);
    std::uint64_t hits = 0, total = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
        if (p == Ns) {
            ++total;
            if (h_from_rank_sums(sums, sizes, N, divisor) >= h_obs - kSlack) ++hits;
            return;
        }
        for (std::size_t g = 0; g < cap.size(); ++g) {
            if (!cap[g]) continue;
            --cap[g];
            sums[g] += ranks[p]; // mid-ranks are halves, so +/- is exact
            rec(p + 1);
            sums[g] -= ranks[p];
            ++cap[g];
        }
    };
    rec(0);
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<double> fdr_stepup(std::span<const double> pvalues) {
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> adjusted(m, 1.0);
    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        double candidate = pvalues[order[i]] * static_cast<double>(m) / static_cast<double>(i + 1);
        running = std::min(running, std::min(candidate, 1.0));
        adjusted[order[i]] = running;
    }
    return adjusted;
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

SplitMixRef SplitMixRef::stream(std::uint64_t seed, std::uint64_t stream_index) {
    return SplitMixRef(mix(seed + kGolden * (stream_index + 1)));
}

std::uint64_t SplitMixRef::next() {
    state_ += kGolden;
    return mix(state_);
}

double SplitMixRef::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t SplitMixRef::next_index(std::size_t n) {
    const unsigned __int128 product =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n);
    return static_cast<std::size_t>(product >> 64);
}

namespace {

double quantile_ref(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

} // namespace

PercentileCI percentile_bootstrap(std::span<const double> x, std::span<const double> y,
                                  const zwise::PairedStatistic& statistic,
                                  std::size_t resamples, double level, std::uint64_t seed) {
    const std::size_t n = x.size();
    std::vector<double> bx(n, 0.0), by(n, 0.0), thetas;
    PercentileCI out;
    for (std::size_t b = 0; b < resamples; ++b) {
        SplitMixRef rng = SplitMixRef::stream(seed, b);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = rng.next_index(n);
            bx[i] = x[j];
            by[i] = y[j];
        }
        auto theta = statistic(bx, by);
        if (!theta) {
            ++out.skipped;
            continue;
        }
        thetas.push_back(*theta);
    }
    if (thetas.empty()) {
        out.degenerate = true;
        return out;
    }
    std::sort(thetas.begin(), thetas.end());
    if (thetas.front() == thetas.back()) {
        out.degenerate = true;
        out.lo = out.hi = thetas.front();
        return out;
    }
    const double alpha = (1.0 - level) / 2.0;
    out.lo = quantile_ref(thetas, alpha);
    out.hi = quantile_ref(thetas, 1.0 - alpha);
    return out;
}

} // namespace oracle

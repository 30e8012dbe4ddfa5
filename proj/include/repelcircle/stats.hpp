#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "repelcircle/accumulate.hpp"
#include "repelcircle/ensemble.hpp"
#include "repelcircle/errors.hpp"
#include "repelcircle/fourier.hpp"
#include "repelcircle/path.hpp"

namespace repelcircle {

/// max_j |x_j| / sqrt(n).
inline double max_statistic(const FluctuationVector& x) {
    double m = 0.0;
    for (int i = 0; i < x.n(); ++i) {
        m = std::max(m, std::abs(x[i]));
    }
    return m / std::sqrt(static_cast<double>(x.n()));
}

/// sqrt(n) sum_j g(theta_j) - n^{3/2} c_0, summed as centered terms
/// g(theta_j) - c_0 so the O(n^{3/2}) level never enters the float.
inline double linear_statistic(const ParticleConfig& config, const FourierTestFunction& g) {
    const double c0 = g.c0();
    KahanSum acc;
    for (double a : config.angles()) {
        acc += g.evaluate(a) - c0;
    }
    return std::sqrt(static_cast<double>(config.n())) * acc.value();
}

/// Piecewise-linear interpolation of the lattice values x_j/sqrt(n)
/// onto the uniform grid, with periodic closure x_n = x_0. The grid
/// position is located in exact integer arithmetic (u = g*n against
/// divisor G), so grid points that coincide with lattice points
/// reproduce x_j/sqrt(n) without interpolation error.
namespace detail {

// Interpolant values on the grid t_g = 2 pi g / G; the fractions are
// formed from exact integer arithmetic, so knots shared by the grid
// are hit exactly. No resolution requirement: a coarse grid simply
// probes the interpolant at fewer points.
inline std::vector<double> zeta_values(const FluctuationVector& x, int grid_points) {
    const int n = x.n();
    std::vector<double> values(static_cast<std::size_t>(grid_points));
    const double root_n = std::sqrt(static_cast<double>(n));
    for (int g = 0; g < grid_points; ++g) {
        const long long u = static_cast<long long>(g) * n;
        const long long j = u / grid_points;
        const double f = static_cast<double>(u % grid_points) / grid_points;
        const double left = x[static_cast<int>(j)];
        const double right = x[static_cast<int>((j + 1) % n)];
        values[static_cast<std::size_t>(g)] = ((1.0 - f) * left + f * right) / root_n;
    }
    return values;
}

}  // namespace detail

inline PathSample build_zeta_n(const FluctuationVector& x, int grid_points) {
    if (grid_points < x.n()) {
        throw std::invalid_argument("build_zeta_n: grid_points must be >= n");
    }
    PathSample p;
    p.grid_points = grid_points;
    p.values = detail::zeta_values(x, grid_points);
    return p;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) {
        throw EmptySampleError("mean: empty sample");
    }
    KahanSum acc;
    for (double x : v) acc += x;
    return acc.value() / static_cast<double>(v.size());
}

/// Unbiased sample variance.
inline double variance(const std::vector<double>& v) {
    if (v.size() < 2) {
        throw std::invalid_argument("variance: need at least two samples");
    }
    const double mu = mean(v);
    KahanSum acc;
    for (double x : v) acc += (x - mu) * (x - mu);
    return acc.value() / static_cast<double>(v.size() - 1);
}

inline double median(std::vector<double> v) {
    if (v.empty()) {
        throw EmptySampleError("median: empty sample");
    }
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) {
        return hi;
    }
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid - 1), v.end());
    return 0.5 * (v[mid - 1] + hi);
}

/// Linearly interpolated quantile of a copy of the sample, p in [0,1].
inline double quantile(std::vector<double> v, double p) {
    if (v.empty()) {
        throw EmptySampleError("quantile: empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("quantile: p must lie in [0, 1]");
    }
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(lo);
    if (lo + 1 >= v.size()) {
        return v.back();
    }
    return (1.0 - frac) * v[lo] + frac * v[lo + 1];
}

/// Pearson correlation; returns 0 when either side is degenerate.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("correlation: size mismatch");
    }
    if (a.size() < 2) {
        throw std::invalid_argument("correlation: need at least two samples");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    KahanSum saa;
    KahanSum sbb;
    KahanSum sab;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    const double denom = std::sqrt(saa.value() * sbb.value());
    return denom > 0.0 ? sab.value() / denom : 0.0;
}

inline double normal_cdf(double x, double mu = 0.0, double sigma = 1.0) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

/// Two-sample Kolmogorov-Smirnov sup-distance. Inputs are copied and
/// sorted; pre-sorted sequences pass through unchanged.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw EmptySampleError("ks_distance: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// One-sample KS distance against an analytic CDF.
template <typename Cdf>
double ks_distance(std::vector<double> a, Cdf cdf) {
    if (a.empty()) {
        throw EmptySampleError("ks_distance: empty sample");
    }
    std::sort(a.begin(), a.end());
    const double m = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / m));
        d = std::max(d, std::abs(f - static_cast<double>(i) / m));
    }
    return d;
}

/// Effective sample size m / (1 + 2 sum rho_t), with the
/// autocorrelation sum truncated at the first lag where rho_t drops
/// below 0.02. Deterministic for a fixed series.
inline double effective_sample_size(const std::vector<double>& v) {
    const std::size_t m = v.size();
    if (m < 2) {
        throw std::invalid_argument("effective_sample_size: need at least two samples");
    }
    const double mu = mean(v);
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = v[i] - mu;
    KahanSum g0;
    for (double x : c) g0 += x * x;
    const double gamma0 = g0.value() / static_cast<double>(m);
    if (!(gamma0 > 0.0)) {
        return static_cast<double>(m);
    }
    double rho_sum = 0.0;
    for (std::size_t t = 1; t < m; ++t) {
        KahanSum g;
        for (std::size_t i = 0; i + t < m; ++i) g += c[i] * c[i + t];
        const double rho = g.value() / (static_cast<double>(m) * gamma0);
        if (rho < 0.02) break;
        rho_sum += rho;
    }
    return static_cast<double>(m) / (1.0 + 2.0 * rho_sum);
}

}  // namespace repelcircle

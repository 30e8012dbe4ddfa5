#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "repelcircle/accumulate.hpp"
#include "repelcircle/ensemble.hpp"
#include "repelcircle/errors.hpp"

namespace repelcircle {
namespace detail {

// 1/sin^2(pi k/n) and 1/sin^4(pi k/n) for k = 1..n-1, stored at k-1.
// Every lattice-difference quantity reuses these instead of calling
// sin O(n^2) times.
struct LatticeTables {
    std::vector<double> inv_sin2;
    std::vector<double> inv_sin4;
};

inline LatticeTables make_lattice_tables(int n) {
    LatticeTables t;
    t.inv_sin2.resize(static_cast<std::size_t>(n - 1));
    t.inv_sin4.resize(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) {
        const double s = std::sin(kPi * k / n);
        const double i2 = 1.0 / (s * s);
        t.inv_sin2[static_cast<std::size_t>(k - 1)] = i2;
        t.inv_sin4[static_cast<std::size_t>(k - 1)] = i2 * i2;
    }
    return t;
}

inline void check_min_gap(const ParticleConfig& config) {
    const auto& th = config.angles();
    const int n = config.n();
    double min_gap = kTwoPi - (th[static_cast<std::size_t>(n - 1)] - th[0]);
    for (int i = 0; i + 1 < n; ++i) {
        min_gap = std::min(min_gap,
                           th[static_cast<std::size_t>(i + 1)] - th[static_cast<std::size_t>(i)]);
    }
    if (min_gap <= kCollisionGuard) {
        throw CollisionError("hamiltonian: pairwise gap at or below the collision guard");
    }
}

// Gap admissibility of the perturbed lattice alpha + x/n^2 checked
// directly from increments, without routing through the [0, 2pi]
// window (the energy difference is rotation invariant).
inline void check_perturbed_gaps(const FluctuationVector& x, int n) {
    const double n2 = static_cast<double>(n) * n;
    for (int i = 0; i + 1 < n; ++i) {
        const double gap = kTwoPi / n + (x[i + 1] - x[i]) / n2;
        if (!(gap > 0.0)) {
            throw OrderingError("perturbed lattice: fluctuation crosses neighbors");
        }
        if (gap <= kCollisionGuard) {
            throw CollisionError("perturbed lattice: gap at or below the collision guard");
        }
    }
    const double wrap = kTwoPi / n - (x[n - 1] - x[0]) / n2;
    if (!(wrap > 0.0)) {
        throw OrderingError("perturbed lattice: fluctuation wraps the circle");
    }
    if (wrap <= kCollisionGuard) {
        throw CollisionError("perturbed lattice: wrap gap at or below the collision guard");
    }
}

}  // namespace detail

/// H_{n,beta}(theta) = -(beta/2) sum_{i != j} 1/sin^2((theta_i - theta_j)/2).
/// Finite on the guarded domain; invariant under common rotation and
/// relabeling. Each unordered pair appears twice in the i != j sum.
inline double hamiltonian(const ParticleConfig& config, const EnsembleParams& params) {
    if (config.n() != params.n) {
        throw std::invalid_argument("hamiltonian: config size does not match params.n");
    }
    detail::check_min_gap(config);
    const auto& th = config.angles();
    const int n = params.n;
    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double s = std::sin(0.5 * (th[static_cast<std::size_t>(i)] -
                                             th[static_cast<std::size_t>(j)]));
            acc += 1.0 / (s * s);
        }
    }
    return -params.beta * acc.value();
}

/// H at the lattice configuration: -(n^3 - n) beta / 6.
inline double ground_state_energy(const EnsembleParams& params) {
    const double dn = static_cast<double>(params.n);
    return -(dn * dn * dn - dn) * params.beta / 6.0;
}

/// H(alpha + x/n^2) - H(alpha), summed pair by pair so the O(beta n^3)
/// ground level never enters and the small difference survives in
/// double precision. Equals hamiltonian(recompose(x, psi, n)) -
/// ground_state_energy for any admissible center psi.
inline double hamiltonian_delta(const FluctuationVector& x, const EnsembleParams& params) {
    const int n = params.n;
    if (x.n() != n) {
        throw std::invalid_argument("hamiltonian_delta: fluctuation size does not match params.n");
    }
    detail::check_perturbed_gaps(x, n);
    const auto tables = detail::make_lattice_tables(n);
    const double n2 = static_cast<double>(n) * n;
    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double half = kPi * (j - i) / n + 0.5 * (x[j] - x[i]) / n2;
            const double s = std::sin(half);
            acc += 1.0 / (s * s) - tables.inv_sin2[static_cast<std::size_t>(j - i - 1)];
        }
    }
    return -params.beta * acc.value();
}

/// Quadratic term G(x) = (beta/4) sum_{i != j} w_{|i-j|} (x_i - x_j)^2,
/// w_k = (-3/2 + sin^2(pi k/n)) / (n^4 sin^4(pi k/n)). Negative
/// semidefinite on the sum-zero hyperplane; equals -x^T A x / 2 with
/// the circulant A of the spectral module.
inline double quadratic_form_g(const FluctuationVector& x, const EnsembleParams& params) {
    const int n = params.n;
    if (x.n() != n) {
        throw std::invalid_argument("quadratic_form_g: fluctuation size does not match params.n");
    }
    const auto tables = detail::make_lattice_tables(n);
    const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
    std::vector<double> w(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) {
        const double sin2 = 1.0 / tables.inv_sin2[static_cast<std::size_t>(k - 1)];
        w[static_cast<std::size_t>(k - 1)] =
            (-1.5 + sin2) * tables.inv_sin4[static_cast<std::size_t>(k - 1)] / n4;
    }
    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            acc += w[static_cast<std::size_t>(j - i - 1)] * d * d;
        }
    }
    return 0.5 * params.beta * acc.value();
}

/// Exact Taylor remainder F(x) = [H(alpha + x/n^2) - H(alpha)] - G(x).
/// Cubic at leading order: |F(eps x)| / eps^3 tends to a finite limit.
inline double cubic_remainder_f(const FluctuationVector& x, const EnsembleParams& params) {
    return hamiltonian_delta(x, params) - quadratic_form_g(x, params);
}

/// Integral form of H(alpha) - H(alpha + x/n^2): per pair,
/// (x_i - x_j)^2/n^4 times
///   int_0^1 [1/2 + cos^2(a + tau b)] / sin^4(a + tau b) (1 - tau) dtau
/// with a = pi(i-j)/n, b = (x_i - x_j)/(2 n^2). Nonnegative, which is
/// the optimality statement for the lattice. Composite Simpson with
/// quad_points subintervals (rounded up to even); the integrand is
/// smooth, so the rule converges at fourth order.
inline double delta_h_integral(const FluctuationVector& x, const EnsembleParams& params,
                               int quad_points) {
    const int n = params.n;
    if (x.n() != n) {
        throw std::invalid_argument("delta_h_integral: fluctuation size does not match params.n");
    }
    if (quad_points < 16) {
        throw RangeError("delta_h_integral: quad_points must be at least 16");
    }
    detail::check_perturbed_gaps(x, n);
    const int q = quad_points + (quad_points % 2);
    const double h = 1.0 / q;
    const double n2 = static_cast<double>(n) * n;
    const double n4 = n2 * n2;

    const auto integrand = [](double a, double b, double tau) {
        const double arg = a + tau * b;
        const double s = std::sin(arg);
        const double c = std::cos(arg);
        const double s2 = s * s;
        return (0.5 + c * c) / (s2 * s2) * (1.0 - tau);
    };

    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double a = kPi * (j - i) / n;
            const double b = 0.5 * (x[j] - x[i]) / n2;
            KahanSum simpson;
            simpson += integrand(a, b, 0.0);
            simpson += integrand(a, b, 1.0);
            for (int m = 1; m < q; ++m) {
                simpson += (m % 2 == 1 ? 4.0 : 2.0) * integrand(a, b, m * h);
            }
            const double integral = simpson.value() * h / 3.0;
            const double d = x[j] - x[i];
            acc += d * d / n4 * integral;
        }
    }
    return params.beta * acc.value();
}

/// Leading-order proxy for the cubic remainder:
/// sum_{i > j} (x_i - x_j)^3 / (n |i - j|_o^5). Tracks the sign and
/// magnitude of F well enough to correlate strongly across samples;
/// used as a cheap cross-check, never as a substitute for F itself.
inline double cubic_proxy_f1(const FluctuationVector& x) {
    const int n = x.n();
    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            const int d = std::min(i - j, n - (i - j));
            const double diff = x[i] - x[j];
            const double d2 = static_cast<double>(d) * d;
            acc += diff * diff * diff / (n * d2 * d2 * d);
        }
    }
    return acc.value();
}

/// max_{i != j} |x_i - x_j| / |i - j|_o with circular distance
/// |i - j|_o = min(|i - j|, n - |i - j|). Zero iff x is constant.
inline double max_increment_ratio(const FluctuationVector& x) {
    const int n = x.n();
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int d = std::min(j - i, n - (j - i));
            best = std::max(best, std::abs(x[i] - x[j]) / d);
        }
    }
    return best;
}

}  // namespace repelcircle

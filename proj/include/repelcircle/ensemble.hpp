#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repelcircle/accumulate.hpp"
#include "repelcircle/errors.hpp"

namespace repelcircle {

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Minimum admissible pairwise angular gap. Below it the energy is
// treated as divergent and operations raise CollisionError instead of
// returning a non-finite value.
inline constexpr double kCollisionGuard = 1e-8;

/// Ensemble size and inverse temperature. Requires n >= 2, beta > 0.
struct EnsembleParams {
    int n;
    double beta;

    EnsembleParams(int n_, double beta_) : n(n_), beta(beta_) {
        if (n < 2) {
            throw std::invalid_argument("EnsembleParams: n must be at least 2");
        }
        if (!(beta > 0.0) || !std::isfinite(beta)) {
            throw std::invalid_argument("EnsembleParams: beta must be positive and finite");
        }
    }
};

/// Ordered particle angles on [0, 2pi]. Construction rejects unsorted
/// input and coincident angles (including the wrap pair 0 and 2pi,
/// which are the same point of the circle). The collision *guard* is
/// enforced by the operations whose value would diverge, not here.
class ParticleConfig {
  public:
    explicit ParticleConfig(std::vector<double> angles) : angles_(std::move(angles)) {
        if (angles_.size() < 2) {
            throw std::invalid_argument("ParticleConfig: need at least 2 angles");
        }
        if (!(angles_.front() >= 0.0) || !(angles_.back() <= kTwoPi)) {
            throw OrderingError("ParticleConfig: angles must lie in [0, 2pi]");
        }
        for (std::size_t i = 0; i + 1 < angles_.size(); ++i) {
            if (angles_[i] > angles_[i + 1]) {
                throw OrderingError("ParticleConfig: angles must be nondecreasing (index " +
                                    std::to_string(i) + ")");
            }
            if (angles_[i] == angles_[i + 1]) {
                throw CollisionError("ParticleConfig: coincident angles at index " +
                                     std::to_string(i));
            }
        }
        if (angles_.back() - angles_.front() == kTwoPi) {
            throw CollisionError("ParticleConfig: first and last angle coincide on the circle");
        }
    }

    int n() const { return static_cast<int>(angles_.size()); }
    const std::vector<double>& angles() const { return angles_; }
    double operator[](int i) const { return angles_[static_cast<std::size_t>(i)]; }

  private:
    std::vector<double> angles_;
};

/// Fluctuation coordinates on the sum-zero hyperplane.
/// Sum-zero is enforced to 1e-9 * n * max|x_j|.
class FluctuationVector {
  public:
    explicit FluctuationVector(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2) {
            throw std::invalid_argument("FluctuationVector: need at least 2 entries");
        }
        KahanSum total;
        double max_abs = 0.0;
        for (double v : values_) {
            total += v;
            max_abs = std::max(max_abs, std::abs(v));
        }
        const double tol = 1e-9 * static_cast<double>(values_.size()) * max_abs;
        if (std::abs(total.value()) > tol) {
            throw std::invalid_argument("FluctuationVector: entries must sum to zero");
        }
    }

    int n() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

    static FluctuationVector zero(int n) {
        return FluctuationVector(std::vector<double>(static_cast<std::size_t>(n), 0.0));
    }

  private:
    std::vector<double> values_;
};

/// The common rotation absorbing the mean angle.
struct CenterOffset {
    double psi = 0.0;
};

struct Decomposition {
    FluctuationVector x;
    CenterOffset center;
};

/// Splits theta_i = 2pi i/n + psi + x_i/n^2 with psi = mean(theta) - pi(n-1)/n.
/// The raw x is recentered by its own (rounding-level) mean, with psi
/// adjusted by the matching amount, so the sum-zero invariant holds and
/// recompose still inverts exactly.
inline Decomposition decompose(const ParticleConfig& config) {
    const int n = config.n();
    const double dn = static_cast<double>(n);
    KahanSum mean_acc;
    for (double a : config.angles()) mean_acc += a;
    double psi = mean_acc.value() / dn - kPi * (dn - 1.0) / dn;

    const double n2 = dn * dn;
    std::vector<double> x(static_cast<std::size_t>(n));
    KahanSum drift;
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = n2 * (config[i] - kTwoPi * i / dn - psi);
        drift += x[static_cast<std::size_t>(i)];
    }
    const double m = drift.value() / dn;
    for (double& v : x) v -= m;
    psi += m / n2;
    return Decomposition{FluctuationVector(std::move(x)), CenterOffset{psi}};
}

/// Inverse of decompose: theta_i = 2pi i/n + psi + x_i/n^2, reduced
/// mod 2pi only as a whole (no relabeling). Raises OrderingError when
/// x crosses neighbors, wraps the full circle, or the shifted
/// configuration straddles the period cut.
inline ParticleConfig recompose(const FluctuationVector& x, const CenterOffset& center, int n) {
    if (x.n() != n) {
        throw std::invalid_argument("recompose: fluctuation size does not match n");
    }
    const double dn = static_cast<double>(n);
    const double n2 = dn * dn;
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        theta[static_cast<std::size_t>(i)] = kTwoPi * i / dn + center.psi + x[i] / n2;
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (!(theta[static_cast<std::size_t>(i)] < theta[static_cast<std::size_t>(i) + 1])) {
            throw OrderingError("recompose: fluctuation crosses neighbors at index " +
                                std::to_string(i));
        }
    }
    if (theta.back() - theta.front() >= kTwoPi) {
        throw OrderingError("recompose: configuration wraps the full circle");
    }
    if (theta.front() < 0.0 || theta.back() > kTwoPi) {
        const double shift = -std::floor(theta.front() / kTwoPi) * kTwoPi;
        for (double& a : theta) a += shift;
        if (theta.front() < 0.0 || theta.back() > kTwoPi) {
            throw OrderingError("recompose: configuration straddles the period cut");
        }
    }
    return ParticleConfig(std::move(theta));
}

}  // namespace repelcircle

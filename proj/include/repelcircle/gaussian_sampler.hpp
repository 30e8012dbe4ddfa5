#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "repelcircle/ensemble.hpp"
#include "repelcircle/parallel.hpp"
#include "repelcircle/rng.hpp"

namespace repelcircle {

/// Precomputed twiddles and mode amplitudes for exact sampling of the
/// degenerate Gaussian on the sum-zero hyperplane,
///   x_j = (2/sqrt n) sum_{k=1}^{(n-1)/2} sigma_k [cos(2 pi jk/n) X_k
///         - sin(2 pi jk/n) Y_k],   sigma_k = sqrt(2/beta) n^2/(2k(n-k)),
/// plus, for even n, the Nyquist mode (-1)^j W / sqrt(n lambda_{n/2})
/// with lambda_{n/2} = beta/16. Immutable, shareable across threads.
class GaussianSamplerTables {
public:
    explicit GaussianSamplerTables(const EnsembleParams& params)
        : n_(params.n), half_((params.n - 1) / 2), even_(params.n % 2 == 0) {
        const double dn = static_cast<double>(n_);
        cos_.resize(static_cast<std::size_t>(n_));
        sin_.resize(static_cast<std::size_t>(n_));
        for (int r = 0; r < n_; ++r) {
            cos_[static_cast<std::size_t>(r)] = std::cos(kTwoPi * r / dn);
            sin_[static_cast<std::size_t>(r)] = std::sin(kTwoPi * r / dn);
        }
        amp_.assign(static_cast<std::size_t>(half_) + 1, 0.0);
        const double scale = std::sqrt(2.0 / params.beta) * 2.0 / std::sqrt(dn);
        for (int k = 1; k <= half_; ++k) {
            amp_[static_cast<std::size_t>(k)] = scale * dn * dn / (2.0 * k * (dn - k));
        }
        nyquist_amp_ = even_ ? 4.0 / std::sqrt(params.beta * dn) : 0.0;
    }

    int n() const { return n_; }
    int half() const { return half_; }
    bool even() const { return even_; }

    /// One exact draw. Consumes (X_k, Y_k) pairs for k = 1.. ascending,
    /// then W for even n; the order is part of the reproducibility
    /// contract.
    std::vector<double> draw(std::mt19937_64& engine) const {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> x(static_cast<std::size_t>(n_), 0.0);
        for (int k = 1; k <= half_; ++k) {
            const double a = amp_[static_cast<std::size_t>(k)];
            const double cx = a * normal(engine);
            const double cy = a * normal(engine);
            int idx = 0;
            for (int j = 0; j < n_; ++j) {
                x[static_cast<std::size_t>(j)] += cx * cos_[static_cast<std::size_t>(idx)] -
                                                  cy * sin_[static_cast<std::size_t>(idx)];
                idx += k;
                if (idx >= n_) idx -= n_;
            }
        }
        if (even_) {
            const double w = nyquist_amp_ * normal(engine);
            for (int j = 0; j < n_; ++j) {
                x[static_cast<std::size_t>(j)] += (j % 2 == 0) ? w : -w;
            }
        }
        return x;
    }

private:
    int n_;
    int half_;
    bool even_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    std::vector<double> amp_;
    double nyquist_amp_;
};

inline FluctuationVector draw_gaussian_fluctuation(const GaussianSamplerTables& tables,
                                                   std::mt19937_64& engine) {
    return FluctuationVector(tables.draw(engine));
}

/// Batch of exact Gaussian fluctuations; sample i always uses stream
/// seed.stream + i, so the batch content does not depend on the thread
/// count or completion order.
inline std::vector<FluctuationVector> sample_gaussian_fluctuation(const EnsembleParams& params,
                                                                  const RngSeed& seed, int count,
                                                                  int threads = 1) {
    if (count < 1) {
        throw std::invalid_argument("sample_gaussian_fluctuation: count must be >= 1");
    }
    const GaussianSamplerTables tables(params);
    std::vector<FluctuationVector> out(static_cast<std::size_t>(count),
                                       FluctuationVector::zero(params.n));
    parallel_for(0, count, threads, [&](int i) {
        auto engine = make_engine(seed.with_stream_offset(static_cast<std::uint64_t>(i)));
        out[static_cast<std::size_t>(i)] = draw_gaussian_fluctuation(tables, engine);
    });
    return out;
}

}  // namespace repelcircle

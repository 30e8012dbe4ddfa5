#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "repelcircle/ensemble.hpp"
#include "repelcircle/fft.hpp"
#include "repelcircle/parallel.hpp"
#include "repelcircle/path.hpp"
#include "repelcircle/rng.hpp"

namespace repelcircle {

/// Cov(zeta(s), zeta(t)) = (2/beta) sum_{k>=1} cos(k(t-s))/k^2
/// = (2/beta)[pi^2/6 - pi d/2 + d^2/4] with d = (t-s) mod 2pi; the
/// closed form is symmetric under d <-> 2pi - d.
inline double limit_covariance(double beta, double s, double t) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("limit_covariance: beta must be positive");
    }
    double d = std::fmod(t - s, kTwoPi);
    if (d < 0.0) d += kTwoPi;
    return (2.0 / beta) * (kPi * kPi / 6.0 - kPi * d / 2.0 + d * d / 4.0);
}

namespace detail {

// One truncated path zeta(t) = sqrt(2/beta) sum_{k=1}^{K}
// [cos(kt) X_k - sin(kt) Y_k]/k on the grid, synthesized by a single
// backward DFT. On the grid t_g = 2 pi g/G mode k lands exactly on
// frequency k mod G, so the aliased accumulation is not an
// approximation. Draw order: (X_k, Y_k) pairs for k ascending.
inline PathSample draw_limit_path(double beta, int truncation, std::mt19937_64& engine, Dft& dft,
                                  std::vector<std::complex<double>>& scratch) {
    const int g_points = dft.size();
    scratch.assign(static_cast<std::size_t>(g_points), {0.0, 0.0});
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::sqrt(2.0 / beta);
    for (int k = 1; k <= truncation; ++k) {
        const double xk = normal(engine);
        const double yk = normal(engine);
        scratch[static_cast<std::size_t>(k % g_points)] +=
            std::complex<double>(scale * xk / k, scale * yk / k);
    }
    const auto synth = dft.backward(scratch);
    PathSample path;
    path.grid_points = g_points;
    path.values.resize(static_cast<std::size_t>(g_points));
    for (int g = 0; g < g_points; ++g) {
        path.values[static_cast<std::size_t>(g)] = synth[static_cast<std::size_t>(g)].real();
    }
    return path;
}

}  // namespace detail

/// Batch of truncated limit paths; path i uses stream seed.stream + i.
inline std::vector<PathSample> sample_limit_process(double beta, const RngSeed& seed,
                                                    int truncation, int grid_points, int count,
                                                    int threads = 1) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("sample_limit_process: beta must be positive");
    }
    if (truncation < 1) {
        throw std::invalid_argument("sample_limit_process: truncation must be >= 1");
    }
    if (grid_points < 2) {
        throw std::invalid_argument("sample_limit_process: grid_points must be >= 2");
    }
    if (count < 1) {
        throw std::invalid_argument("sample_limit_process: count must be >= 1");
    }
    std::vector<PathSample> out(static_cast<std::size_t>(count));
    struct Worker {
        Dft dft;
        std::vector<std::complex<double>> scratch;
    };
    parallel_for_stateful(
        0, count, threads, [grid_points] { return Worker{Dft(grid_points), {}}; },
        [&](Worker& w, int i) {
            auto engine = make_engine(seed.with_stream_offset(static_cast<std::uint64_t>(i)));
            out[static_cast<std::size_t>(i)] =
                detail::draw_limit_path(beta, truncation, engine, w.dft, w.scratch);
        });
    return out;
}

}  // namespace repelcircle

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "repelcircle/accumulate.hpp"
#include "repelcircle/ensemble.hpp"
#include "repelcircle/gaussian_sampler.hpp"
#include "repelcircle/hamiltonian.hpp"
#include "repelcircle/limit_process.hpp"
#include "repelcircle/mcmc.hpp"
#include "repelcircle/rng.hpp"
#include "repelcircle/spectral.hpp"
#include "repelcircle/stats.hpp"

using Catch::Approx;
using namespace repelcircle;

namespace {

double column_variance(const std::vector<FluctuationVector>& batch, int j) {
    std::vector<double> col;
    col.reserve(batch.size());
    for (const auto& x : batch) col.push_back(x.values()[static_cast<std::size_t>(j)]);
    return variance(col);
}

}  // namespace

TEST_CASE("gaussian draws respect the zero-sum constraint", "[samplers]") {
    const EnsembleParams p(31, 2.0);
    const auto batch = sample_gaussian_fluctuation(p, RngSeed{5, 0}, 50);
    for (const auto& x : batch) {
        KahanSum s;
        double amax = 0.0;
        for (double v : x.values()) {
            s += v;
            amax = std::max(amax, std::abs(v));
        }
        REQUIRE(std::abs(s.value()) <= 1e-9 * 31 * std::max(1.0, amax));
    }
}

TEST_CASE("gaussian marginal variance matches the covariance", "[samplers]") {
    for (const int n : {8, 31}) {
        const EnsembleParams p(n, 2.0);
        const auto batch = sample_gaussian_fluctuation(p, RngSeed{17, 0}, 20000);
        const double target = covariance_x(p, 0, 0);
        REQUIRE(column_variance(batch, 0) == Approx(target).epsilon(0.05));
    }
}

TEST_CASE("gaussian batches are reproducible and stream-indexed", "[samplers]") {
    const EnsembleParams p(12, 2.0);
    const auto a = sample_gaussian_fluctuation(p, RngSeed{9, 3}, 40);
    const auto b = sample_gaussian_fluctuation(p, RngSeed{9, 3}, 40);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 12; ++j)
            REQUIRE(a[static_cast<std::size_t>(i)].values()[static_cast<std::size_t>(j)] ==
                    b[static_cast<std::size_t>(i)].values()[static_cast<std::size_t>(j)]);

    // Element i of a batch equals a singleton batch drawn at stream + i.
    const auto shifted = sample_gaussian_fluctuation(p, RngSeed{9, 10}, 1);
    REQUIRE(a[7].values() == shifted[0].values());
}

TEST_CASE("gaussian batches do not depend on the thread count", "[samplers]") {
    const EnsembleParams p(9, 2.0);
    const auto serial = sample_gaussian_fluctuation(p, RngSeed{21, 0}, 64, 1);
    const auto parallel = sample_gaussian_fluctuation(p, RngSeed{21, 0}, 64, 4);
    for (int i = 0; i < 64; ++i) REQUIRE(serial[static_cast<std::size_t>(i)].values() ==
                                         parallel[static_cast<std::size_t>(i)].values());
}

TEST_CASE("quadrupling the coupling halves every draw exactly", "[samplers]") {
    const int n = 12;
    const auto x2 = sample_gaussian_fluctuation(EnsembleParams(n, 2.0), RngSeed{33, 0}, 50);
    const auto x8 = sample_gaussian_fluctuation(EnsembleParams(n, 8.0), RngSeed{33, 0}, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < n; ++j)
            REQUIRE(x8[static_cast<std::size_t>(i)].values()[static_cast<std::size_t>(j)] ==
                    0.5 * x2[static_cast<std::size_t>(i)].values()[static_cast<std::size_t>(j)]);
}

TEST_CASE("chain emits the scheduled number of samples", "[samplers]") {
    const EnsembleParams p(8, 2.0);
    McmcConfig cfg;
    cfg.sweeps = 100;
    cfg.burn_in = 20;
    cfg.thin = 10;
    const auto res = sample_mcmc(p, RngSeed{1, 0}, cfg);
    REQUIRE(res.samples.size() == 8);
}

TEST_CASE("chain acceptance stays in the working band", "[samplers]") {
    const EnsembleParams p(32, 2.0);
    McmcConfig cfg;
    cfg.sweeps = 4000;
    cfg.burn_in = 400;
    cfg.thin = 10;
    const auto res = sample_mcmc(p, RngSeed{2, 0}, cfg);
    REQUIRE(res.acceptance_rate >= 0.2);
    REQUIRE(res.acceptance_rate <= 0.6);
    REQUIRE(res.rotation_acceptance_rate > 0.0);
    REQUIRE(res.rotation_acceptance_rate < 1.0);
}

TEST_CASE("a vanishing step freezes the chain at the lattice", "[samplers]") {
    const int n = 16;
    const EnsembleParams p(n, 2.0);
    McmcConfig cfg;
    cfg.sweeps = 300;
    cfg.burn_in = 50;
    cfg.thin = 5;
    cfg.step_scale = 1e-9;
    const auto res = sample_mcmc(p, RngSeed{3, 0}, cfg);
    REQUIRE(res.acceptance_rate > 0.9);
    for (const auto& config : res.samples)
        for (int i = 0; i < n; ++i)
            REQUIRE(std::abs(config.angles()[static_cast<std::size_t>(i)] - kTwoPi * i / n) <=
                    1e-5);
}

TEST_CASE("local energy difference matches the full difference", "[samplers]") {
    const int n = 8;
    const EnsembleParams p(n, 2.0);
    std::vector<double> theta(n);
    for (int i = 0; i < n; ++i) theta[static_cast<std::size_t>(i)] = kTwoPi * i / n + 0.1;
    const ParticleConfig config(theta);

    const int site = 3;
    const double moved = theta[site] + 0.01;
    const double local = local_hamiltonian_delta(config, site, moved, p);

    std::vector<double> after = theta;
    after[site] = moved;
    const double full = hamiltonian(ParticleConfig(after), p) - hamiltonian(config, p);
    REQUIRE(local == Approx(full).epsilon(1e-9));
    REQUIRE_THROWS_AS(local_hamiltonian_delta(config, 8, moved, p), std::invalid_argument);
}

TEST_CASE("chains are reproducible", "[samplers]") {
    const EnsembleParams p(8, 2.0);
    McmcConfig cfg;
    cfg.sweeps = 500;
    cfg.burn_in = 100;
    cfg.thin = 20;
    const auto a = sample_mcmc(p, RngSeed{4, 0}, cfg);
    const auto b = sample_mcmc(p, RngSeed{4, 0}, cfg);
    REQUIRE(a.acceptance_rate == b.acceptance_rate);
    REQUIRE(a.rotation_acceptance_rate == b.rotation_acceptance_rate);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t s = 0; s < a.samples.size(); ++s)
        REQUIRE(a.samples[s].angles() == b.samples[s].angles());
}

TEST_CASE("chain moments approach the gaussian predictions", "[samplers]") {
    const int n = 8;
    const EnsembleParams p(n, 2.0);
    McmcConfig cfg;
    cfg.sweeps = 30000;
    cfg.burn_in = 2000;
    cfg.thin = 5;
    const auto res = sample_mcmc(p, RngSeed{6, 0}, cfg);

    std::vector<double> x0;
    std::vector<double> inc;
    x0.reserve(res.samples.size());
    inc.reserve(res.samples.size());
    for (const auto& config : res.samples) {
        const auto dec = decompose(config);
        x0.push_back(dec.x.values()[0]);
        inc.push_back(dec.x.values()[1] - dec.x.values()[0]);
    }

    // Generous band: Monte Carlo error plus the cubic model discrepancy.
    const double var_pred = covariance_x(p, 0, 0);
    REQUIRE(variance(x0) == Approx(var_pred).epsilon(0.25));
    REQUIRE(std::abs(mean(x0)) <= 0.25 * std::sqrt(var_pred));

    const double inc_pred = covariance_increment(p, 1, 0, 0);
    REQUIRE(variance(inc) == Approx(inc_pred).epsilon(0.25));
    REQUIRE(std::abs(mean(inc)) <= 0.25 * std::sqrt(inc_pred));
}

TEST_CASE("single mode limit paths have unit variance components", "[samplers]") {
    const int count = 20000;
    const auto paths = sample_limit_process(2.0, RngSeed{8, 0}, 1, 8, count);
    std::vector<double> v0;
    v0.reserve(count);
    for (const auto& path : paths) v0.push_back(path.values[0]);
    // With one mode zeta(0) = X_1, a standard normal.
    REQUIRE(variance(v0) == Approx(1.0).epsilon(0.05));
    REQUIRE(std::abs(mean(v0)) <= 3.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("limit path synthesis matches the direct trigonometric sum", "[samplers]") {
    const double beta = 2.0;
    const int truncation = 7;
    const int grid = 16;
    const RngSeed seed{44, 5};
    const auto paths = sample_limit_process(beta, seed, truncation, grid, 3);

    for (int i = 0; i < 3; ++i) {
        auto engine = make_engine(seed.with_stream_offset(static_cast<std::uint64_t>(i)));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> xk(truncation + 1), yk(truncation + 1);
        for (int k = 1; k <= truncation; ++k) {
            xk[static_cast<std::size_t>(k)] = normal(engine);
            yk[static_cast<std::size_t>(k)] = normal(engine);
        }
        const double scale = std::sqrt(2.0 / beta);
        for (int g = 0; g < grid; ++g) {
            const double t = kTwoPi * g / grid;
            KahanSum direct;
            for (int k = 1; k <= truncation; ++k)
                direct += scale * (xk[static_cast<std::size_t>(k)] * std::cos(k * t) -
                                   yk[static_cast<std::size_t>(k)] * std::sin(k * t)) /
                          k;
            REQUIRE(paths[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(g)] ==
                    Approx(direct.value()).margin(1e-12));
        }
    }
}

TEST_CASE("limit variance at the origin tracks the truncated target", "[samplers]") {
    const double beta = 2.0;
    const int truncation = 200;
    const auto paths = sample_limit_process(beta, RngSeed{10, 0}, truncation, 4, 20000);
    std::vector<double> v0;
    v0.reserve(paths.size());
    for (const auto& path : paths) v0.push_back(path.values[0]);

    KahanSum target;
    for (int k = 1; k <= truncation; ++k) target += 1.0 / (static_cast<double>(k) * k);
    REQUIRE(variance(v0) == Approx(2.0 / beta * target.value()).epsilon(0.05));
}

TEST_CASE("limit paths are reproducible and thread independent", "[samplers]") {
    const auto a = sample_limit_process(2.0, RngSeed{12, 0}, 50, 16, 8, 1);
    const auto b = sample_limit_process(2.0, RngSeed{12, 0}, 50, 16, 8, 3);
    for (int i = 0; i < 8; ++i) REQUIRE(a[static_cast<std::size_t>(i)].values ==
                                        b[static_cast<std::size_t>(i)].values);
}

TEST_CASE("limit covariance closed form", "[samplers]") {
    REQUIRE(limit_covariance(2.0, 0.0, 0.0) == Approx(kPi * kPi / 6.0).epsilon(1e-14));
    REQUIRE(limit_covariance(2.0, 0.0, kPi) == Approx(-kPi * kPi / 12.0).epsilon(1e-12));
    for (const double d : {0.3, 1.1, 2.9}) {
        REQUIRE(limit_covariance(2.0, 0.0, d) ==
                Approx(limit_covariance(2.0, 0.0, kTwoPi - d)).epsilon(1e-12));
        REQUIRE(limit_covariance(4.0, 0.0, d) ==
                Approx(0.5 * limit_covariance(2.0, 0.0, d)).epsilon(1e-12));
        // Stationarity: only the gap matters.
        REQUIRE(limit_covariance(2.0, 1.4, 1.4 + d) ==
                Approx(limit_covariance(2.0, 0.0, d)).epsilon(1e-12));
    }
    REQUIRE_THROWS_AS(limit_covariance(0.0, 0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(limit_covariance(-2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("limit covariance matches the mode sum", "[samplers]") {
    const double beta = 2.0;
    const int big = 100000;
    for (const double d : {0.0, 0.5, kPi, 5.0}) {
        KahanSum partial;
        for (int k = 1; k <= big; ++k)
            partial += std::cos(k * d) / (static_cast<double>(k) * k);
        const double series = 2.0 / beta * partial.value();
        REQUIRE(std::abs(limit_covariance(beta, 0.0, d) - series) <= 1e-4);
    }
}

TEST_CASE("empirical limit covariance tracks the closed form on a grid", "[samplers]") {
    const double beta = 2.0;
    const int grid = 64;
    const int count = 20000;
    const auto paths = sample_limit_process(beta, RngSeed{14, 0}, 500, grid, count);

    for (int g = 0; g < grid; g += 7) {
        KahanSum cross;
        for (const auto& path : paths)
            cross += path.values[0] * path.values[static_cast<std::size_t>(g)];
        KahanSum m0, mg;
        for (const auto& path : paths) {
            m0 += path.values[0];
            mg += path.values[static_cast<std::size_t>(g)];
        }
        const double emp = cross.value() / count - (m0.value() / count) * (mg.value() / count);
        const double target = limit_covariance(beta, 0.0, kTwoPi * g / grid);
        REQUIRE(std::abs(emp - target) < 0.1);
    }
}

TEST_CASE("limit process batches validate their arguments", "[samplers]") {
    REQUIRE_THROWS_AS(sample_limit_process(0.0, RngSeed{0, 0}, 10, 8, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_limit_process(2.0, RngSeed{0, 0}, 0, 8, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_limit_process(2.0, RngSeed{0, 0}, 10, 1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_limit_process(2.0, RngSeed{0, 0}, 10, 8, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_gaussian_fluctuation(EnsembleParams(8, 2.0), RngSeed{0, 0}, 0),
                      std::invalid_argument);
}

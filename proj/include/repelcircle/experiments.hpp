#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "repelcircle/ensemble.hpp"
#include "repelcircle/fourier.hpp"
#include "repelcircle/gaussian_sampler.hpp"
#include "repelcircle/hamiltonian.hpp"
#include "repelcircle/limit_process.hpp"
#include "repelcircle/mcmc.hpp"
#include "repelcircle/parallel.hpp"
#include "repelcircle/path.hpp"
#include "repelcircle/rng.hpp"
#include "repelcircle/stats.hpp"

namespace repelcircle {

/// One gated quantity: holds iff |value - target| <= tolerance.
/// One-sided gates are encoded as a clamped deficit against target 0.
struct CheckEntry {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;

    bool holds() const { return std::abs(value - target) <= tolerance; }
    friend bool operator==(const CheckEntry&, const CheckEntry&) = default;
};

struct ExperimentReport {
    std::string name;
    int n = 0;
    double beta = 0.0;
    long long replicas = 0;
    std::vector<CheckEntry> checks;
    std::map<std::string, double> extras;
    bool pass = false;

    void finalize() {
        pass = std::all_of(checks.begin(), checks.end(),
                           [](const CheckEntry& c) { return c.holds(); });
    }
    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

enum class SampleSource { GaussianApprox, Mcmc };

struct CltOptions {
    SampleSource source = SampleSource::GaussianApprox;
    double variance_rel_tol = 0.10;
    double ks_tol = 0.03;
    bool gate_ks = true;
    double min_ess = 0.0;
    McmcConfig mcmc;
    int threads = 1;
};

namespace detail {

// Center offset for recomposing a Gaussian-approximation draw:
// uniform on [0, 2 pi/n) intersected with the window that keeps
// theta_0 >= 0 and theta_{n-1} <= 2 pi. The intersection shaves
// O(1/n^2) slivers off the nominal interval.
inline double draw_center_offset(const FluctuationVector& x, int n, std::mt19937_64& engine) {
    const double n2 = static_cast<double>(n) * n;
    const double lo = std::max(0.0, -x[0] / n2);
    const double hi = kTwoPi / n - std::max(0.0, x[n - 1]) / n2;
    if (!(hi > lo)) {
        return lo;
    }
    std::uniform_real_distribution<double> u(lo, hi);
    return u(engine);
}

}  // namespace detail

/// Distribution of the centered linear statistic sqrt(n) sum g(theta_j)
/// - n^{3/2} c_0 against its limit normal N(0, (2/beta) sum |c_k|^2).
/// The gaussian-approx source recomposes exact Gaussian fluctuations
/// with a uniform center offset; the mcmc source runs one chain and
/// reports its effective sample size.
inline ExperimentReport clt_experiment(const EnsembleParams& params, const FourierTestFunction& g,
                                       int replicas, const RngSeed& seed, const CltOptions& opt,
                                       std::vector<double>* raw_out = nullptr) {
    ExperimentReport rep;
    rep.name = opt.source == SampleSource::GaussianApprox ? "clt-gauss" : "clt-mcmc";
    rep.n = params.n;
    rep.beta = params.beta;
    const double target_var = g.target_variance(params.beta);

    std::vector<double> stat;
    if (opt.source == SampleSource::GaussianApprox) {
        if (replicas < 100) {
            throw std::invalid_argument("clt_experiment: replicas must be >= 100");
        }
        stat.resize(static_cast<std::size_t>(replicas));
        const GaussianSamplerTables tables(params);
        parallel_for(0, replicas, opt.threads, [&](int i) {
            auto engine = make_engine(seed.with_stream_offset(static_cast<std::uint64_t>(i)));
            const FluctuationVector x = draw_gaussian_fluctuation(tables, engine);
            const double psi = detail::draw_center_offset(x, params.n, engine);
            stat[static_cast<std::size_t>(i)] =
                linear_statistic(recompose(x, CenterOffset{psi}, params.n), g);
        });
        rep.replicas = replicas;
    } else {
        const McmcResult chain = sample_mcmc(params, seed, opt.mcmc);
        stat.reserve(chain.samples.size());
        for (const auto& config : chain.samples) {
            stat.push_back(linear_statistic(config, g));
        }
        rep.replicas = static_cast<long long>(stat.size());
        rep.extras["acceptance_rate"] = chain.acceptance_rate;
        rep.extras["rotation_acceptance_rate"] = chain.rotation_acceptance_rate;
        const double ess = effective_sample_size(stat);
        rep.extras["ess"] = ess;
        if (opt.min_ess > 0.0) {
            rep.checks.push_back({"ess_deficit", std::max(0.0, opt.min_ess - ess), 0.0, 0.0});
        }
    }

    const double v = variance(stat);
    rep.extras["mean"] = mean(stat);
    rep.checks.push_back({"variance", v, target_var, opt.variance_rel_tol * target_var});
    if (target_var > 0.0) {
        const double sigma = std::sqrt(target_var);
        const double ks =
            ks_distance(stat, [&](double t) { return normal_cdf(t, 0.0, sigma); });
        if (opt.gate_ks) {
            rep.checks.push_back({"ks_normal", ks, 0.0, opt.ks_tol});
        } else {
            rep.extras["ks_normal"] = ks;
        }
    }
    if (raw_out) {
        *raw_out = std::move(stat);
    }
    rep.finalize();
    return rep;
}

/// KS comparison of max_j |x_j|/sqrt(n) over Gaussian-approximation
/// samples against the grid sup of |zeta| over truncated limit paths.
/// The two sides use disjoint stream ranges of the same seed.
inline ExperimentReport maxstat_experiment(const EnsembleParams& params, int replicas,
                                           int truncation, int grid_points, const RngSeed& seed,
                                           double ks_tol = 0.05, int threads = 1,
                                           std::vector<double>* raw_gauss = nullptr,
                                           std::vector<double>* raw_limit = nullptr) {
    if (replicas < 1000) {
        throw std::invalid_argument("maxstat_experiment: replicas must be >= 1000");
    }
    std::vector<double> gauss_stat(static_cast<std::size_t>(replicas));
    const GaussianSamplerTables tables(params);
    parallel_for(0, replicas, threads, [&](int i) {
        auto engine = make_engine(seed.with_stream_offset(static_cast<std::uint64_t>(i)));
        gauss_stat[static_cast<std::size_t>(i)] =
            max_statistic(draw_gaussian_fluctuation(tables, engine));
    });

    const auto paths =
        sample_limit_process(params.beta, seed.with_stream_offset(static_cast<std::uint64_t>(replicas)),
                             truncation, grid_points, replicas, threads);
    std::vector<double> limit_stat(static_cast<std::size_t>(replicas));
    for (int i = 0; i < replicas; ++i) {
        double m = 0.0;
        for (double v : paths[static_cast<std::size_t>(i)].values) {
            m = std::max(m, std::abs(v));
        }
        limit_stat[static_cast<std::size_t>(i)] = m;
    }

    ExperimentReport rep;
    rep.name = "maxstat";
    rep.n = params.n;
    rep.beta = params.beta;
    rep.replicas = replicas;
    rep.checks.push_back({"ks", ks_distance(gauss_stat, limit_stat), 0.0, ks_tol});
    rep.extras["truncation"] = static_cast<double>(truncation);
    rep.extras["grid_points"] = static_cast<double>(grid_points);
    rep.extras["gauss_q25"] = quantile(gauss_stat, 0.25);
    rep.extras["gauss_q50"] = quantile(gauss_stat, 0.50);
    rep.extras["gauss_q75"] = quantile(gauss_stat, 0.75);
    rep.extras["limit_q25"] = quantile(limit_stat, 0.25);
    rep.extras["limit_q50"] = quantile(limit_stat, 0.50);
    rep.extras["limit_q75"] = quantile(limit_stat, 0.75);
    if (raw_gauss) {
        *raw_gauss = std::move(gauss_stat);
    }
    if (raw_limit) {
        *raw_limit = std::move(limit_stat);
    }
    rep.finalize();
    return rep;
}

/// n psi mod 2 pi against the uniform law, plus its correlation with
/// x_0, over one Metropolis chain.
inline ExperimentReport psi_uniformity_experiment(const EnsembleParams& params,
                                                  const McmcConfig& cfg, const RngSeed& seed,
                                                  double ks_tol = 0.05, double corr_tol = 0.1,
                                                  std::vector<double>* raw_npsi = nullptr,
                                                  std::vector<double>* raw_x0 = nullptr) {
    const McmcResult chain = sample_mcmc(params, seed, cfg);
    std::vector<double> npsi;
    std::vector<double> x0;
    npsi.reserve(chain.samples.size());
    x0.reserve(chain.samples.size());
    for (const auto& config : chain.samples) {
        const Decomposition dec = decompose(config);
        double u = std::fmod(static_cast<double>(params.n) * dec.center.psi, kTwoPi);
        if (u < 0.0) u += kTwoPi;
        npsi.push_back(u);
        x0.push_back(dec.x[0]);
    }

    ExperimentReport rep;
    rep.name = "psi-uniform";
    rep.n = params.n;
    rep.beta = params.beta;
    rep.replicas = static_cast<long long>(npsi.size());
    const double ks = ks_distance(npsi, [](double t) {
        return std::clamp(t / kTwoPi, 0.0, 1.0);
    });
    rep.checks.push_back({"ks_uniform", ks, 0.0, ks_tol});
    rep.checks.push_back({"corr_npsi_x0", correlation(npsi, x0), 0.0, corr_tol});
    rep.extras["acceptance_rate"] = chain.acceptance_rate;
    rep.extras["rotation_acceptance_rate"] = chain.rotation_acceptance_rate;
    if (raw_npsi) {
        *raw_npsi = std::move(npsi);
    }
    if (raw_x0) {
        *raw_x0 = std::move(x0);
    }
    rep.finalize();
    return rep;
}

/// Median of |F| under the Gaussian sampler across an increasing n
/// ladder; passes iff the medians never increase and the last one is
/// below final_tol. Each rung uses its own stream block so the ladder
/// is reproducible rung by rung.
inline ExperimentReport f_smallness_experiment(double beta, const std::vector<int>& n_list,
                                               int replicas, const RngSeed& seed, int threads = 1,
                                               double final_tol = 0.05) {
    if (n_list.empty()) {
        throw std::invalid_argument("f_smallness_experiment: empty n_list");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 16) {
            throw std::invalid_argument("f_smallness_experiment: each n must be >= 16");
        }
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            throw std::invalid_argument("f_smallness_experiment: n_list must increase strictly");
        }
    }
    if (replicas < 1) {
        throw std::invalid_argument("f_smallness_experiment: replicas must be >= 1");
    }

    ExperimentReport rep;
    rep.name = "f-small";
    rep.n = n_list.back();
    rep.beta = beta;
    rep.replicas = replicas;

    std::vector<double> medians;
    for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
        const EnsembleParams p(n_list[idx], beta);
        const GaussianSamplerTables tables(p);
        const RngSeed base =
            seed.with_stream_offset(static_cast<std::uint64_t>(idx) * static_cast<std::uint64_t>(replicas));
        std::vector<double> abs_f(static_cast<std::size_t>(replicas));
        parallel_for(0, replicas, threads, [&](int i) {
            auto engine = make_engine(base.with_stream_offset(static_cast<std::uint64_t>(i)));
            const FluctuationVector x = draw_gaussian_fluctuation(tables, engine);
            abs_f[static_cast<std::size_t>(i)] = std::abs(cubic_remainder_f(x, p));
        });
        const double med = median(abs_f);
        medians.push_back(med);
        rep.extras["median_n" + std::to_string(p.n)] = med;
    }

    double worst_increase = 0.0;
    for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
        worst_increase = std::max(worst_increase, medians[i + 1] - medians[i]);
    }
    rep.checks.push_back({"median_increase", worst_increase, 0.0, 0.0});
    rep.checks.push_back({"final_median", medians.back(), 0.0, final_tol});
    rep.finalize();
    return rep;
}

/// Empirical Cov(zeta_n(0), zeta_n(t)) over Gaussian-approximation
/// samples against the closed-form limit covariance, max abs error
/// over the grid. The reduction runs in replica index order, so the
/// report does not depend on the thread count.
inline ExperimentReport functional_covariance_check(const EnsembleParams& params, int replicas,
                                                    int grid_points, const RngSeed& seed,
                                                    double tol = 0.1, int threads = 1,
                                                    std::vector<double>* raw_cov = nullptr) {
    if (replicas < 5000) {
        throw std::invalid_argument("functional_covariance_check: replicas must be >= 5000");
    }
    if (grid_points < 2) {
        throw std::invalid_argument("functional_covariance_check: grid_points must be >= 2");
    }
    const GaussianSamplerTables tables(params);
    const std::size_t g_count = static_cast<std::size_t>(grid_points);
    std::vector<double> vals(static_cast<std::size_t>(replicas) * g_count);
    parallel_for(0, replicas, threads, [&](int i) {
        auto engine = make_engine(seed.with_stream_offset(static_cast<std::uint64_t>(i)));
        const FluctuationVector x = draw_gaussian_fluctuation(tables, engine);
        const auto row = detail::zeta_values(x, grid_points);
        std::copy(row.begin(), row.end(),
                  vals.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * g_count));
    });

    std::vector<KahanSum> mean_acc(g_count);
    for (int i = 0; i < replicas; ++i) {
        const double* row = vals.data() + static_cast<std::size_t>(i) * g_count;
        for (std::size_t g = 0; g < g_count; ++g) {
            mean_acc[g] += row[g];
        }
    }
    std::vector<double> means(g_count);
    for (std::size_t g = 0; g < g_count; ++g) {
        means[g] = mean_acc[g].value() / static_cast<double>(replicas);
    }

    std::vector<KahanSum> cov_acc(g_count);
    for (int i = 0; i < replicas; ++i) {
        const double* row = vals.data() + static_cast<std::size_t>(i) * g_count;
        const double d0 = row[0] - means[0];
        for (std::size_t g = 0; g < g_count; ++g) {
            cov_acc[g] += d0 * (row[g] - means[g]);
        }
    }

    ExperimentReport rep;
    rep.name = "cov-check";
    rep.n = params.n;
    rep.beta = params.beta;
    rep.replicas = replicas;

    double max_err = 0.0;
    if (raw_cov) {
        raw_cov->clear();
    }
    PathSample grid;
    grid.grid_points = grid_points;
    for (std::size_t g = 0; g < g_count; ++g) {
        const double emp = cov_acc[g].value() / static_cast<double>(replicas - 1);
        const double target = limit_covariance(params.beta, 0.0, grid.t(static_cast<int>(g)));
        if (raw_cov) {
            raw_cov->push_back(emp);
        }
        max_err = std::max(max_err, std::abs(emp - target));
        if (g == 0) {
            rep.extras["var_zeta0"] = emp;
            rep.extras["var_zeta0_target"] = target;
        }
    }
    rep.checks.push_back({"max_abs_cov_error", max_err, 0.0, tol});
    rep.extras["grid_points"] = static_cast<double>(grid_points);
    rep.finalize();
    return rep;
}

}  // namespace repelcircle

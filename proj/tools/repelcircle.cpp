#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "repelcircle/ensemble.hpp"
#include "repelcircle/errors.hpp"
#include "repelcircle/experiments.hpp"
#include "repelcircle/fourier.hpp"
#include "repelcircle/gaussian_sampler.hpp"
#include "repelcircle/identities.hpp"
#include "repelcircle/io.hpp"
#include "repelcircle/limit_process.hpp"
#include "repelcircle/mcmc.hpp"
#include "repelcircle/parallel.hpp"
#include "repelcircle/path.hpp"
#include "repelcircle/rng.hpp"
#include "repelcircle/spectral.hpp"

namespace rc = repelcircle;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string format = "both";
    int threads = 0;
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out-dir", c.out_dir, "directory for output files")->capture_default_str();
    sub->add_option("--format", c.format, "which outputs to write")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    sub->add_option("--threads", c.threads,
                    "worker threads; 0 = REPELCIRCLE_THREADS or all cores")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

bool want_csv(const CommonOpts& c) { return c.format != "json"; }
bool want_json(const CommonOpts& c) { return c.format != "csv"; }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runtime goes to stdout only, never into an output file, so a rerun
// with the same seed stays byte-identical.
void print_runtime(const Stopwatch& w) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << w.seconds();
    std::cout << "runtime: " << os.str() << " s\n";
}

void emit(const CommonOpts& c, const std::string& stem, const char* ext,
          const std::string& content) {
    std::filesystem::create_directories(c.out_dir);
    const std::filesystem::path path = std::filesystem::path(c.out_dir) / (stem + ext);
    rc::write_text_file(path, content);
    std::cout << "wrote " << path.string() << "\n";
}

void print_report(const rc::ExperimentReport& rep) {
    for (const auto& ch : rep.checks) {
        std::cout << "  " << ch.name << ": value=" << rc::format_double(ch.value)
                  << " target=" << rc::format_double(ch.target)
                  << " tol=" << rc::format_double(ch.tolerance)
                  << (ch.holds() ? "" : "  <-- FAIL") << "\n";
    }
    std::cout << rep.name << ": " << (rep.pass ? "pass" : "FAIL") << "\n";
}

// Every experiment writes its report JSON unconditionally; --format
// only gates the raw-sample CSV next to it.
int finish_experiment(const rc::ExperimentReport& rep, const CommonOpts& c,
                      const rc::CsvBuilder* raw, const Stopwatch& w) {
    const std::string stem = rc::file_stem(rep.name, rep.n, rep.beta, c.seed);
    emit(c, stem, ".json", rc::report_to_json(rep).dump(2) + "\n");
    if (raw != nullptr && want_csv(c)) {
        emit(c, stem, ".csv", raw->str());
    }
    print_report(rep);
    print_runtime(w);
    return rep.pass ? 0 : 2;
}

std::vector<std::string> sample_header(int n) {
    std::vector<std::string> header;
    header.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        header.push_back("x_" + std::to_string(j));
    }
    return header;
}

struct McmcFlags {
    long long sweeps = 20000;
    long long burn_in = 2000;
    long long thin = 10;
    double step_scale = 1.5;
};

void add_mcmc_flags(CLI::App* sub, McmcFlags& f) {
    sub->add_option("--sweeps", f.sweeps, "total Metropolis sweeps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--burn-in", f.burn_in, "sweeps discarded before retention")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--thin", f.thin, "keep every thin-th sweep after burn-in")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--step-scale", f.step_scale, "proposal width multiplier")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

rc::McmcConfig to_config(const McmcFlags& f) {
    rc::McmcConfig cfg;
    cfg.sweeps = f.sweeps;
    cfg.burn_in = f.burn_in;
    cfg.thin = f.thin;
    cfg.step_scale = f.step_scale;
    return cfg;
}

int run_identities(const CommonOpts& c, int n_max) {
    Stopwatch w;
    rc::CsvBuilder csv;
    csv.row({"id", "n", "m", "closed", "brute", "rel_err"});
    double max_rel = 0.0;
    long long rows = 0;
    auto add = [&](const rc::IdentityId& id) {
        const double closed = rc::closed_form(id);
        const double brute = rc::brute_force(id);
        const double rel = std::abs(closed - brute) / std::max(1.0, std::abs(closed));
        max_rel = std::max(max_rel, rel);
        ++rows;
        csv.row({rc::to_string(id.tag()), std::to_string(id.n()),
                 id.m() ? std::to_string(*id.m()) : std::string(), rc::format_double(closed),
                 rc::format_double(brute), rc::format_double(rel)});
    };
    for (int n = 2; n <= n_max; ++n) {
        add(rc::IdentityId(rc::IdentityTag::INV_SIN2, n));
        add(rc::IdentityId(rc::IdentityTag::INV_SIN4, n));
        for (int m = 1; m < n; ++m) {
            add(rc::IdentityId(rc::IdentityTag::WSIN2, n, m));
            add(rc::IdentityId(rc::IdentityTag::WSIN4, n, m));
        }
    }
    const double tol = 1e-9;
    const bool pass = max_rel < tol;
    const std::string stem = rc::file_stem("identities", n_max, 0.0, c.seed);
    if (want_csv(c)) {
        emit(c, stem, ".csv", csv.str());
    }
    if (want_json(c)) {
        rc::json j;
        j["name"] = "identities";
        j["n_max"] = n_max;
        j["rows"] = rows;
        j["max_rel_err"] = max_rel;
        j["tolerance"] = tol;
        j["pass"] = pass;
        emit(c, stem, ".json", j.dump(2) + "\n");
    }
    std::cout << "identities: " << (pass ? "pass" : "FAIL")
              << " (max_rel_err=" << rc::format_double(max_rel) << ")\n";
    print_runtime(w);
    return pass ? 0 : 2;
}

int run_spectrum(const CommonOpts& c, int n, double beta) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const rc::Spectrum closed = rc::eigenvalues_closed_form(params);
    const rc::Spectrum dft = rc::eigenvalues_dft(rc::build_a_row(params));
    rc::CsvBuilder csv;
    csv.row({"k", "lambda_closed", "lambda_dft", "rel_err"});
    double max_rel = 0.0;
    for (int k = 0; k < n; ++k) {
        const double lc = closed.lambda[static_cast<std::size_t>(k)];
        const double ld = dft.lambda[static_cast<std::size_t>(k)];
        const double rel = k == 0 ? std::abs(ld - lc) : std::abs(ld - lc) / lc;
        max_rel = std::max(max_rel, rel);
        csv.row({std::to_string(k), rc::format_double(lc), rc::format_double(ld),
                 rc::format_double(rel)});
    }
    const double tol = 1e-9;
    const bool pass = max_rel < tol;
    const std::string stem = rc::file_stem("spectrum", n, beta, c.seed);
    if (want_csv(c)) {
        emit(c, stem, ".csv", csv.str());
    }
    if (want_json(c)) {
        rc::json j;
        j["name"] = "spectrum";
        j["n"] = n;
        j["beta"] = beta;
        j["max_rel_err"] = max_rel;
        j["tolerance"] = tol;
        j["pass"] = pass;
        j["lambda_closed"] = closed.lambda;
        j["lambda_dft"] = dft.lambda;
        emit(c, stem, ".json", j.dump(2) + "\n");
    }
    std::cout << "spectrum: " << (pass ? "pass" : "FAIL")
              << " (max_rel_err=" << rc::format_double(max_rel) << ")\n";
    print_runtime(w);
    return pass ? 0 : 2;
}

int run_sample_gauss(const CommonOpts& c, int n, double beta, int count) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const auto samples = rc::sample_gaussian_fluctuation(params, rc::RngSeed{c.seed, 0}, count,
                                                         rc::resolve_thread_count(c.threads));
    const std::string stem = rc::file_stem("sample-gauss", n, beta, c.seed);
    if (want_csv(c)) {
        rc::CsvBuilder csv;
        csv.row(sample_header(n));
        std::vector<std::string> cells(static_cast<std::size_t>(n));
        for (const auto& x : samples) {
            for (int j = 0; j < n; ++j) {
                cells[static_cast<std::size_t>(j)] = rc::format_double(x[j]);
            }
            csv.row(cells);
        }
        emit(c, stem, ".csv", csv.str());
    }
    if (want_json(c)) {
        rc::json j;
        j["name"] = "sample-gauss";
        j["n"] = n;
        j["beta"] = beta;
        j["seed"] = c.seed;
        j["count"] = count;
        emit(c, stem, ".json", j.dump(2) + "\n");
    }
    print_runtime(w);
    return 0;
}

int run_sample_mcmc(const CommonOpts& c, int n, double beta, const McmcFlags& f) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const rc::McmcResult res = rc::sample_mcmc(params, rc::RngSeed{c.seed, 0}, to_config(f));
    const std::string stem = rc::file_stem("sample-mcmc", n, beta, c.seed);
    if (want_csv(c)) {
        rc::CsvBuilder csv;
        csv.row(sample_header(n));
        std::vector<std::string> cells(static_cast<std::size_t>(n));
        for (const auto& config : res.samples) {
            const rc::Decomposition dec = rc::decompose(config);
            for (int j = 0; j < n; ++j) {
                cells[static_cast<std::size_t>(j)] = rc::format_double(dec.x[j]);
            }
            csv.row(cells);
        }
        emit(c, stem, ".csv", csv.str());
    }
    if (want_json(c)) {
        rc::json j;
        j["name"] = "sample-mcmc";
        j["n"] = n;
        j["beta"] = beta;
        j["seed"] = c.seed;
        j["sweeps"] = f.sweeps;
        j["burn_in"] = f.burn_in;
        j["thin"] = f.thin;
        j["step_scale"] = f.step_scale;
        j["retained"] = res.samples.size();
        j["acceptance_rate"] = res.acceptance_rate;
        j["rotation_acceptance_rate"] = res.rotation_acceptance_rate;
        emit(c, stem, ".json", j.dump(2) + "\n");
    }
    std::cout << "acceptance_rate: " << rc::format_double(res.acceptance_rate)
              << "  rotation: " << rc::format_double(res.rotation_acceptance_rate) << "\n";
    print_runtime(w);
    return 0;
}

int run_sample_limit(const CommonOpts& c, double beta, int truncation, int grid_points,
                     int count) {
    Stopwatch w;
    const auto paths = rc::sample_limit_process(beta, rc::RngSeed{c.seed, 0}, truncation,
                                                grid_points, count,
                                                rc::resolve_thread_count(c.threads));
    // The limit process has no particle count; grid_points fills the n
    // slot of the file stem.
    const std::string stem = rc::file_stem("sample-limit", grid_points, beta, c.seed);
    if (want_csv(c)) {
        rc::CsvBuilder csv;
        csv.row({"path", "t", "value"});
        for (std::size_t i = 0; i < paths.size(); ++i) {
            for (int g = 0; g < grid_points; ++g) {
                csv.row({std::to_string(i), rc::format_double(paths[i].t(g)),
                         rc::format_double(paths[i].values[static_cast<std::size_t>(g)])});
            }
        }
        emit(c, stem, ".csv", csv.str());
    }
    if (want_json(c)) {
        rc::json j;
        j["name"] = "sample-limit";
        j["beta"] = beta;
        j["seed"] = c.seed;
        j["truncation"] = truncation;
        j["grid_points"] = grid_points;
        j["count"] = count;
        emit(c, stem, ".json", j.dump(2) + "\n");
    }
    print_runtime(w);
    return 0;
}

int run_clt(const CommonOpts& c, int n, double beta, int replicas, const std::string& g_spec,
            const std::string& source, double var_tol, double ks_tol, double min_ess,
            const McmcFlags& f) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const rc::FourierTestFunction g = rc::parse_g_spec(g_spec);
    rc::CltOptions opt;
    opt.source = source == "mcmc" ? rc::SampleSource::Mcmc : rc::SampleSource::GaussianApprox;
    opt.variance_rel_tol = var_tol;
    opt.ks_tol = ks_tol;
    opt.gate_ks = opt.source == rc::SampleSource::GaussianApprox;
    opt.min_ess = min_ess;
    opt.mcmc = to_config(f);
    opt.threads = rc::resolve_thread_count(c.threads);
    std::vector<double> raw;
    const rc::ExperimentReport rep = rc::clt_experiment(
        params, g, replicas, rc::RngSeed{c.seed, 0}, opt, want_csv(c) ? &raw : nullptr);
    rc::CsvBuilder csv;
    if (want_csv(c)) {
        csv.row({"statistic"});
        for (double v : raw) {
            csv.row({rc::format_double(v)});
        }
    }
    return finish_experiment(rep, c, want_csv(c) ? &csv : nullptr, w);
}

int run_maxstat(const CommonOpts& c, int n, double beta, int replicas, int truncation,
                int grid_points, double ks_tol) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const bool raw = want_csv(c);
    std::vector<double> gauss_raw;
    std::vector<double> limit_raw;
    const rc::ExperimentReport rep = rc::maxstat_experiment(
        params, replicas, truncation, grid_points, rc::RngSeed{c.seed, 0}, ks_tol,
        rc::resolve_thread_count(c.threads), raw ? &gauss_raw : nullptr,
        raw ? &limit_raw : nullptr);
    rc::CsvBuilder csv;
    if (raw) {
        csv.row({"side", "value"});
        for (double v : gauss_raw) {
            csv.row({"gauss", rc::format_double(v)});
        }
        for (double v : limit_raw) {
            csv.row({"limit", rc::format_double(v)});
        }
    }
    return finish_experiment(rep, c, raw ? &csv : nullptr, w);
}

int run_cov_check(const CommonOpts& c, int n, double beta, int replicas, int grid_points,
                  double tol) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const bool raw = want_csv(c);
    std::vector<double> emp;
    const rc::ExperimentReport rep = rc::functional_covariance_check(
        params, replicas, grid_points, rc::RngSeed{c.seed, 0}, tol,
        rc::resolve_thread_count(c.threads), raw ? &emp : nullptr);
    rc::CsvBuilder csv;
    if (raw) {
        csv.row({"t", "empirical", "target"});
        rc::PathSample grid;
        grid.grid_points = grid_points;
        for (int g = 0; g < grid_points; ++g) {
            const double t = grid.t(g);
            csv.row({rc::format_double(t), rc::format_double(emp[static_cast<std::size_t>(g)]),
                     rc::format_double(rc::limit_covariance(beta, 0.0, t))});
        }
    }
    return finish_experiment(rep, c, raw ? &csv : nullptr, w);
}

int run_f_small(const CommonOpts& c, double beta, const std::vector<int>& n_list, int replicas,
                double final_tol) {
    Stopwatch w;
    const rc::ExperimentReport rep =
        rc::f_smallness_experiment(beta, n_list, replicas, rc::RngSeed{c.seed, 0},
                                   rc::resolve_thread_count(c.threads), final_tol);
    rc::CsvBuilder csv;
    if (want_csv(c)) {
        csv.row({"n", "median_abs_f"});
        for (int n : n_list) {
            csv.row({std::to_string(n),
                     rc::format_double(rep.extras.at("median_n" + std::to_string(n)))});
        }
    }
    return finish_experiment(rep, c, want_csv(c) ? &csv : nullptr, w);
}

int run_psi_uniform(const CommonOpts& c, int n, double beta, const McmcFlags& f, double ks_tol,
                    double corr_tol) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const bool raw = want_csv(c);
    std::vector<double> npsi;
    std::vector<double> x0;
    const rc::ExperimentReport rep = rc::psi_uniformity_experiment(
        params, to_config(f), rc::RngSeed{c.seed, 0}, ks_tol, corr_tol, raw ? &npsi : nullptr,
        raw ? &x0 : nullptr);
    rc::CsvBuilder csv;
    if (raw) {
        csv.row({"npsi", "x_0"});
        for (std::size_t i = 0; i < npsi.size(); ++i) {
            csv.row({rc::format_double(npsi[i]), rc::format_double(x0[i])});
        }
    }
    return finish_experiment(rep, c, raw ? &csv : nullptr, w);
}

int run_bounds(const CommonOpts& c, int n, double beta, int l_max, double c_max) {
    Stopwatch w;
    const rc::EnsembleParams params(n, beta);
    const rc::BoundReport rep = rc::check_increment_bounds(params, l_max, want_csv(c));
    const bool pass = rep.c_fit <= c_max;
    const std::string stem = rc::file_stem("bounds", n, beta, c.seed);
    if (want_csv(c)) {
        rc::CsvBuilder csv;
        csv.row({"l", "d", "ratio"});
        for (const auto& e : rep.ratios) {
            csv.row({std::to_string(e.l), std::to_string(e.d), rc::format_double(e.ratio)});
        }
        emit(c, stem, ".csv", csv.str());
    }
    rc::json j;
    j["name"] = "bounds";
    j["n"] = rep.n;
    j["beta"] = rep.beta;
    j["l_max"] = rep.l_max;
    j["c_fit"] = rep.c_fit;
    j["witness_l"] = rep.witness_l;
    j["witness_d"] = rep.witness_d;
    j["c_max"] = c_max;
    j["pass"] = pass;
    emit(c, stem, ".json", j.dump(2) + "\n");
    std::cout << "bounds: " << (pass ? "pass" : "FAIL")
              << " (c_fit=" << rc::format_double(rep.c_fit) << " at l=" << rep.witness_l
              << " d=" << rep.witness_d << ", c_max=" << rc::format_double(c_max) << ")\n";
    print_runtime(w);
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong-repulsion circular ensemble toolkit"};
    app.require_subcommand(1);

    int exit_code = 0;

    struct {
        CommonOpts c;
        int n_max = 64;
    } ident;
    auto* s_ident = app.add_subcommand("identities", "closed forms vs brute force sums");
    add_common(s_ident, ident.c);
    s_ident->add_option("--n-max", ident.n_max, "largest n in the scan")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    s_ident->callback([&] { exit_code = run_identities(ident.c, ident.n_max); });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
    } spec;
    auto* s_spec = app.add_subcommand("spectrum", "closed-form vs DFT eigenvalues of A");
    add_common(s_spec, spec.c);
    s_spec->add_option("--n", spec.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_spec->add_option("--beta", spec.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_spec->callback([&] { exit_code = run_spectrum(spec.c, spec.n, spec.beta); });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        int count = 1000;
    } gauss;
    auto* s_gauss = app.add_subcommand("sample-gauss", "draw Gaussian fluctuation vectors");
    add_common(s_gauss, gauss.c);
    s_gauss->add_option("--n", gauss.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_gauss->add_option("--beta", gauss.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_gauss->add_option("--count", gauss.count, "samples to draw")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    s_gauss->callback(
        [&] { exit_code = run_sample_gauss(gauss.c, gauss.n, gauss.beta, gauss.count); });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        McmcFlags f;
    } mc;
    auto* s_mc = app.add_subcommand("sample-mcmc", "run the Metropolis chain and emit fluctuations");
    add_common(s_mc, mc.c);
    s_mc->add_option("--n", mc.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_mc->add_option("--beta", mc.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_mcmc_flags(s_mc, mc.f);
    s_mc->callback([&] { exit_code = run_sample_mcmc(mc.c, mc.n, mc.beta, mc.f); });

    struct {
        CommonOpts c;
        double beta = 2.0;
        int truncation = 1000;
        int grid_points = 256;
        int count = 100;
    } lim;
    auto* s_lim = app.add_subcommand("sample-limit", "draw truncated limit-process paths");
    add_common(s_lim, lim.c);
    s_lim->add_option("--beta", lim.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_lim->add_option("--truncation", lim.truncation, "Fourier modes kept")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    s_lim->add_option("--grid-points", lim.grid_points, "grid resolution on [0, 2 pi)")
        ->check(CLI::Range(2, 100000000))
        ->capture_default_str();
    s_lim->add_option("--count", lim.count, "paths to draw")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    s_lim->callback([&] {
        exit_code = run_sample_limit(lim.c, lim.beta, lim.truncation, lim.grid_points, lim.count);
    });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        int replicas = 20000;
        std::string g_spec = "1:0.5,0";
        std::string source = "gauss";
        double var_tol = 0.10;
        double ks_tol = 0.03;
        double min_ess = 0.0;
        McmcFlags f;
    } clt;
    auto* s_clt = app.add_subcommand("clt", "linear-statistic CLT experiment");
    add_common(s_clt, clt.c);
    s_clt->add_option("--n", clt.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_clt->add_option("--beta", clt.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_clt->add_option("--replicas", clt.replicas, "independent replicas (gauss source)")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    s_clt->add_option("--g-spec", clt.g_spec, "test function, k:re,im;... over modes k >= 0")
        ->capture_default_str();
    s_clt->add_option("--source", clt.source, "sample source")
        ->check(CLI::IsMember({"gauss", "mcmc"}))
        ->capture_default_str();
    s_clt->add_option("--var-tol", clt.var_tol, "relative variance tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_clt->add_option("--ks-tol", clt.ks_tol, "KS distance tolerance (gauss source)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_clt->add_option("--min-ess", clt.min_ess, "required effective sample size (mcmc source)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_mcmc_flags(s_clt, clt.f);
    s_clt->callback([&] {
        exit_code = run_clt(clt.c, clt.n, clt.beta, clt.replicas, clt.g_spec, clt.source,
                            clt.var_tol, clt.ks_tol, clt.min_ess, clt.f);
    });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        int replicas = 10000;
        int truncation = 1000;
        int grid_points = 2048;
        double ks_tol = 0.05;
    } mx;
    auto* s_mx = app.add_subcommand("maxstat", "max statistic vs limit-process sup");
    add_common(s_mx, mx.c);
    s_mx->add_option("--n", mx.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_mx->add_option("--beta", mx.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_mx->add_option("--replicas", mx.replicas, "replicas per side")
        ->check(CLI::Range(1000, 100000000))
        ->capture_default_str();
    s_mx->add_option("--truncation", mx.truncation, "Fourier modes kept in the limit paths")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    s_mx->add_option("--grid-points", mx.grid_points, "grid resolution for the path sup")
        ->check(CLI::Range(2, 100000000))
        ->capture_default_str();
    s_mx->add_option("--ks-tol", mx.ks_tol, "KS distance tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_mx->callback([&] {
        exit_code = run_maxstat(mx.c, mx.n, mx.beta, mx.replicas, mx.truncation, mx.grid_points,
                                mx.ks_tol);
    });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        int replicas = 20000;
        int grid_points = 64;
        double tol = 0.1;
    } cov;
    auto* s_cov = app.add_subcommand("cov-check", "empirical zeta_n covariance vs the limit");
    add_common(s_cov, cov.c);
    s_cov->add_option("--n", cov.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_cov->add_option("--beta", cov.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_cov->add_option("--replicas", cov.replicas, "Gaussian-approximation samples")
        ->check(CLI::Range(5000, 100000000))
        ->capture_default_str();
    s_cov->add_option("--grid-points", cov.grid_points, "grid values of t")
        ->check(CLI::Range(2, 100000000))
        ->capture_default_str();
    s_cov->add_option("--tol", cov.tol, "max abs covariance error allowed")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_cov->callback([&] {
        exit_code = run_cov_check(cov.c, cov.n, cov.beta, cov.replicas, cov.grid_points, cov.tol);
    });

    struct {
        CommonOpts c;
        double beta = 2.0;
        std::vector<int> n_list{64, 128, 256, 512};
        int replicas = 200;
        double final_tol = 0.05;
    } fs;
    auto* s_fs = app.add_subcommand("f-small", "median |F| decay over an n ladder");
    add_common(s_fs, fs.c);
    s_fs->add_option("--beta", fs.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_fs->add_option("--n-list", fs.n_list, "strictly increasing n ladder")
        ->delimiter(',')
        ->capture_default_str();
    s_fs->add_option("--replicas", fs.replicas, "samples per rung")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    s_fs->add_option("--final-tol", fs.final_tol, "bound on the last median")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_fs->callback(
        [&] { exit_code = run_f_small(fs.c, fs.beta, fs.n_list, fs.replicas, fs.final_tol); });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        McmcFlags f{200000, 20000, 20, 1.5};
        double ks_tol = 0.05;
        double corr_tol = 0.1;
    } psi;
    auto* s_psi = app.add_subcommand("psi-uniform", "center offset uniformity on the chain");
    add_common(s_psi, psi.c);
    s_psi->add_option("--n", psi.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_psi->add_option("--beta", psi.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_mcmc_flags(s_psi, psi.f);
    s_psi->add_option("--ks-tol", psi.ks_tol, "KS distance tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_psi->add_option("--corr-tol", psi.corr_tol, "allowed |corr(n psi, x_0)|")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_psi->callback([&] {
        exit_code = run_psi_uniform(psi.c, psi.n, psi.beta, psi.f, psi.ks_tol, psi.corr_tol);
    });

    struct {
        CommonOpts c;
        int n = 0;
        double beta = 2.0;
        int l_max = 50;
        double c_max = 10.0;
    } bnd;
    auto* s_bnd = app.add_subcommand("bounds", "increment covariance bound scan");
    add_common(s_bnd, bnd.c);
    s_bnd->add_option("--n", bnd.n, "number of particles")->required()->check(CLI::Range(2, 1000000));
    s_bnd->add_option("--beta", bnd.beta, "inverse temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_bnd->add_option("--l-max", bnd.l_max, "largest increment lag scanned")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    s_bnd->add_option("--c-max", bnd.c_max, "largest admissible fitted constant")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s_bnd->callback(
        [&] { exit_code = run_bounds(bnd.c, bnd.n, bnd.beta, bnd.l_max, bnd.c_max); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const rc::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

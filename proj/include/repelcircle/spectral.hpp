#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "repelcircle/accumulate.hpp"
#include "repelcircle/ensemble.hpp"
#include "repelcircle/errors.hpp"
#include "repelcircle/fft.hpp"

namespace repelcircle {

/// Generating row (A_{0,0}, ..., A_{0,n-1}) of the circulant precision
/// matrix. Invariants for rows built by build_a_row: entries sum to 0
/// within 1e-12 * n * max|entry| and entries[k] == entries[n-k].
struct CirculantRow {
    int n = 0;
    double beta = 0.0;
    std::vector<double> entries;
};

/// Eigenvalues of A in DFT order. lambda[0] = 0 (translation mode) and
/// lambda[k] = lambda[n-k].
struct Spectrum {
    int n = 0;
    double beta = 0.0;
    std::vector<double> lambda;
};

/// Off-diagonal A_{0,k} = (beta/2) [-3/(n^4 sin^4(pi k/n)) +
/// 2/(n^4 sin^2(pi k/n))]; the diagonal is defined as the negated
/// off-diagonal sum, which pins the row sum to zero by construction.
inline CirculantRow build_a_row(const EnsembleParams& params) {
    const int n = params.n;
    CirculantRow row;
    row.n = n;
    row.beta = params.beta;
    row.entries.resize(static_cast<std::size_t>(n));
    const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
    for (int k = 1; 2 * k <= n; ++k) {
        const double s = std::sin(kPi * k / n);
        const double i2 = 1.0 / (s * s);
        const double v = 0.5 * params.beta * (-3.0 * i2 * i2 + 2.0 * i2) / n4;
        row.entries[static_cast<std::size_t>(k)] = v;
        row.entries[static_cast<std::size_t>(n - k)] = v;
    }
    KahanSum off_sum;
    for (int k = 1; k < n; ++k) {
        off_sum += row.entries[static_cast<std::size_t>(k)];
    }
    row.entries[0] = -off_sum.value();
    return row;
}

/// lambda_k = beta k^2 (n-k)^2 / n^4.
inline Spectrum eigenvalues_closed_form(const EnsembleParams& params) {
    const int n = params.n;
    Spectrum sp;
    sp.n = n;
    sp.beta = params.beta;
    sp.lambda.resize(static_cast<std::size_t>(n));
    const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
    for (int k = 0; k < n; ++k) {
        const double dk = static_cast<double>(k);
        const double dnk = static_cast<double>(n - k);
        sp.lambda[static_cast<std::size_t>(k)] = params.beta * dk * dk * dnk * dnk / n4;
    }
    return sp;
}

/// Direct complex DFT of the generating row: lambda_k =
/// sum_j A_{0,j} exp(2 pi i j k / n). Kept O(n^2) and dependency-free
/// so it is an oracle independent of both the closed form and the FFT
/// backend.
inline std::vector<std::complex<double>> dft_row(const CirculantRow& row) {
    const int n = row.n;
    if (n < 1 || static_cast<int>(row.entries.size()) != n) {
        throw std::invalid_argument("dft_row: row size mismatch");
    }
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        KahanSum re;
        KahanSum im;
        for (int j = 0; j < n; ++j) {
            const double phase = kTwoPi * (static_cast<double>(j) * k / n);
            const double a = row.entries[static_cast<std::size_t>(j)];
            re += a * std::cos(phase);
            im += a * std::sin(phase);
        }
        out[static_cast<std::size_t>(k)] = {re.value(), im.value()};
    }
    return out;
}

inline Spectrum eigenvalues_dft(const CirculantRow& row) {
    const auto cx = dft_row(row);
    Spectrum sp;
    sp.n = row.n;
    sp.beta = row.beta;
    sp.lambda.resize(cx.size());
    for (std::size_t k = 0; k < cx.size(); ++k) {
        sp.lambda[k] = cx[k].real();
    }
    return sp;
}

/// E x_k x_j = (1/n) sum_{m=1}^{n-1} cos(2 pi m (k-j)/n) / lambda_m.
/// Depends on (k-j) mod n only; rows sum to zero because the m = 0
/// mode is excluded.
inline double covariance_x(const EnsembleParams& params, int k, int j) {
    const int n = params.n;
    if (k < 0 || k >= n || j < 0 || j >= n) {
        throw std::invalid_argument("covariance_x: index out of range");
    }
    const int d = ((k - j) % n + n) % n;
    const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
    KahanSum acc;
    for (int m = 1; m < n; ++m) {
        const double dm = static_cast<double>(m);
        const double dnm = static_cast<double>(n - m);
        const double lambda = params.beta * dm * dm * dnm * dnm / n4;
        acc += std::cos(kTwoPi * (static_cast<double>(m) * d / n)) / lambda;
    }
    return acc.value() / n;
}

/// Full covariance table c_d = covariance_x(d, 0) for d = 0..n-1 via a
/// single backward DFT of (0, 1/lambda_1, ..., 1/lambda_{n-1})/n. Must
/// agree with the direct per-query sum.
inline std::vector<double> covariance_x_table(const EnsembleParams& params) {
    const int n = params.n;
    const auto sp = eigenvalues_closed_form(params);
    std::vector<std::complex<double>> in(static_cast<std::size_t>(n), {0.0, 0.0});
    for (int m = 1; m < n; ++m) {
        in[static_cast<std::size_t>(m)] = {1.0 / (sp.lambda[static_cast<std::size_t>(m)] * n), 0.0};
    }
    Dft dft(n);
    const auto out = dft.backward(in);
    std::vector<double> table(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        table[static_cast<std::size_t>(d)] = out[static_cast<std::size_t>(d)].real();
    }
    return table;
}

/// E xi_k xi_j for the lag-l increment xi_i = x_{i+l} - x_i:
/// (1/n) sum_m 4 sin^2(pi m l/n) cos(2 pi m (k-j)/n) / lambda_m.
/// l = n is the full circle, xi == 0, returned as exact zero rather
/// than a sum of rounded sin(pi m) terms.
inline double covariance_increment(const EnsembleParams& params, int l, int k, int j) {
    const int n = params.n;
    if (l < 1 || l > n) {
        throw std::invalid_argument("covariance_increment: lag out of range");
    }
    if (k < 0 || k >= n || j < 0 || j >= n) {
        throw std::invalid_argument("covariance_increment: index out of range");
    }
    if (l == n) {
        return 0.0;
    }
    const int d = ((k - j) % n + n) % n;
    const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
    KahanSum acc;
    for (int m = 1; m < n; ++m) {
        const double dm = static_cast<double>(m);
        const double dnm = static_cast<double>(n - m);
        const double lambda = params.beta * dm * dm * dnm * dnm / n4;
        const double sl = std::sin(kPi * (static_cast<double>(m) * l / n));
        acc += 4.0 * sl * sl * std::cos(kTwoPi * (static_cast<double>(m) * d / n)) / lambda;
    }
    return acc.value() / n;
}

struct BoundEntry {
    int l = 0;
    int d = 0;
    double ratio = 0.0;
};

/// Result of the increment-bound scan: the smallest constant C_fit
/// with |E xi_k xi_j| <= C_fit min{l, l^2/|k-j|_o} over the grid
/// (normalized to beta = 2, so the value is beta-invariant), plus the
/// witness cell where the maximum ratio occurs.
struct BoundReport {
    int n = 0;
    double beta = 0.0;
    int l_max = 0;
    double c_fit = 0.0;
    int witness_l = 0;
    int witness_d = 0;
    std::vector<BoundEntry> ratios;
};

inline BoundReport check_increment_bounds(const EnsembleParams& params, int l_max,
                                          bool report = false) {
    const int n = params.n;
    if (l_max < 1 || l_max > n - 1) {
        throw std::invalid_argument("check_increment_bounds: l_max must lie in [1, n-1]");
    }
    BoundReport out;
    out.n = n;
    out.beta = params.beta;
    out.l_max = l_max;

    const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
    std::vector<double> inv_lambda(static_cast<std::size_t>(n), 0.0);
    for (int m = 1; m < n; ++m) {
        const double dm = static_cast<double>(m);
        const double dnm = static_cast<double>(n - m);
        inv_lambda[static_cast<std::size_t>(m)] = n4 / (params.beta * dm * dm * dnm * dnm);
    }
    std::vector<double> cos_table(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        cos_table[static_cast<std::size_t>(r)] = std::cos(kTwoPi * r / n);
    }

    const double to_beta2 = params.beta / 2.0;
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (int l = 1; l <= l_max; ++l) {
        for (int m = 1; m < n; ++m) {
            const double sl = std::sin(kPi * (static_cast<double>(m) * l / n));
            weight[static_cast<std::size_t>(m)] =
                4.0 * sl * sl * inv_lambda[static_cast<std::size_t>(m)];
        }
        for (int d = 0; d < n; ++d) {
            KahanSum acc;
            for (int m = 1; m < n; ++m) {
                const std::size_t r =
                    static_cast<std::size_t>((static_cast<long long>(m) * d) % n);
                acc += weight[static_cast<std::size_t>(m)] * cos_table[r];
            }
            const double cov = acc.value() / n;
            const int d_o = std::min(d, n - d);
            const double candidate =
                d_o == 0 ? static_cast<double>(l)
                         : std::min(static_cast<double>(l),
                                    static_cast<double>(l) * l / d_o);
            const double ratio = std::abs(cov) * to_beta2 / candidate;
            if (report) {
                out.ratios.push_back({l, d, ratio});
            }
            if (ratio > out.c_fit) {
                out.c_fit = ratio;
                out.witness_l = l;
                out.witness_d = d;
            }
        }
    }
    if (!std::isfinite(out.c_fit)) {
        throw std::runtime_error("check_increment_bounds: non-finite C_fit");
    }
    return out;
}

}  // namespace repelcircle

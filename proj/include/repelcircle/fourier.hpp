#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "repelcircle/errors.hpp"

namespace repelcircle {

/// Real trigonometric polynomial g(theta) = sum_k c_k e^{i k theta}
/// with finite support and c_{-k} = conj(c_k); only k >= 0 is stored,
/// negative modes are implied. Under this convention g(theta) = c_0 +
/// sum_{k>=1} 2 [Re c_k cos(k theta) - Im c_k sin(k theta)].
class FourierTestFunction {
public:
    explicit FourierTestFunction(const std::map<int, std::complex<double>>& coefficients) {
        for (const auto& [k, c] : coefficients) {
            const int key = k < 0 ? -k : k;
            const std::complex<double> canon = k < 0 ? std::conj(c) : c;
            auto [it, inserted] = coeffs_.try_emplace(key, canon);
            if (!inserted && std::abs(it->second - canon) > 1e-12 * std::abs(canon)) {
                throw std::invalid_argument(
                    "FourierTestFunction: c_{-k} must equal conj(c_k)");
            }
        }
        const auto it = coeffs_.find(0);
        if (it != coeffs_.end() && it->second.imag() != 0.0) {
            throw std::invalid_argument("FourierTestFunction: c_0 must be real");
        }
    }

    const std::map<int, std::complex<double>>& coefficients() const { return coeffs_; }

    double c0() const {
        const auto it = coeffs_.find(0);
        return it == coeffs_.end() ? 0.0 : it->second.real();
    }

    int max_mode() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    double evaluate(double theta) const {
        double v = 0.0;
        for (const auto& [k, c] : coeffs_) {
            if (k == 0) {
                v += c.real();
            } else {
                v += 2.0 * (c.real() * std::cos(k * theta) - c.imag() * std::sin(k * theta));
            }
        }
        return v;
    }

    double derivative(double theta) const {
        double v = 0.0;
        for (const auto& [k, c] : coeffs_) {
            if (k != 0) {
                v -= 2.0 * k * (c.real() * std::sin(k * theta) + c.imag() * std::cos(k * theta));
            }
        }
        return v;
    }

    /// (2/beta) sum_{k>=1} |c_k|^2: the limit variance of the centered
    /// linear statistic.
    double target_variance(double beta) const {
        double s = 0.0;
        for (const auto& [k, c] : coeffs_) {
            if (k > 0) s += std::norm(c);
        }
        return 2.0 / beta * s;
    }

private:
    std::map<int, std::complex<double>> coeffs_;
};

namespace detail {

inline ParseError g_spec_error(const std::string& what, std::size_t pos, std::string_view token) {
    return ParseError("g-spec: " + what + " at position " + std::to_string(pos) + " near '" +
                      std::string(token) + "'");
}

}  // namespace detail

/// Mini-format `k:re,im;k:re,im;...` with k >= 0 (negative modes are
/// implied by conjugate symmetry). `1:0.5,0` is cos theta, `1:0,-0.5`
/// is sin theta.
inline FourierTestFunction parse_g_spec(const std::string& text) {
    if (text.empty()) {
        throw detail::g_spec_error("empty specification", 0, "");
    }
    std::map<int, std::complex<double>> coeffs;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        const std::string_view token(text.data() + pos, end - pos);
        if (token.empty()) {
            throw detail::g_spec_error("empty entry", pos, token);
        }
        const char* p = token.data();
        const char* const last = token.data() + token.size();

        int k = 0;
        auto kr = std::from_chars(p, last, k);
        if (kr.ec != std::errc{} || kr.ptr == last || *kr.ptr != ':') {
            throw detail::g_spec_error("expected 'k:'", pos, token);
        }
        if (k < 0) {
            throw detail::g_spec_error("mode index must be nonnegative", pos, token);
        }
        p = kr.ptr + 1;

        double re = 0.0;
        auto rr = std::from_chars(p, last, re);
        if (rr.ec != std::errc{} || rr.ptr == last || *rr.ptr != ',') {
            throw detail::g_spec_error("expected real part followed by ','",
                                       pos + static_cast<std::size_t>(p - token.data()), token);
        }
        p = rr.ptr + 1;

        double im = 0.0;
        auto ir = std::from_chars(p, last, im);
        if (ir.ec != std::errc{} || ir.ptr != last) {
            throw detail::g_spec_error("expected imaginary part",
                                       pos + static_cast<std::size_t>(p - token.data()), token);
        }

        if (!coeffs.emplace(k, std::complex<double>(re, im)).second) {
            throw detail::g_spec_error("duplicate mode index", pos, token);
        }
        if (end == text.size()) break;
        pos = end + 1;
    }
    try {
        return FourierTestFunction(coeffs);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("g-spec: ") + e.what());
    }
}

}  // namespace repelcircle

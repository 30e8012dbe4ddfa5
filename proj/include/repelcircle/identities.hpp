#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "repelcircle/accumulate.hpp"
#include "repelcircle/ensemble.hpp"
#include "repelcircle/errors.hpp"

namespace repelcircle {

enum class IdentityTag { INV_SIN2, INV_SIN4, WSIN2, WSIN4 };

inline std::string to_string(IdentityTag tag) {
    switch (tag) {
        case IdentityTag::INV_SIN2: return "INV_SIN2";
        case IdentityTag::INV_SIN4: return "INV_SIN4";
        case IdentityTag::WSIN2: return "WSIN2";
        case IdentityTag::WSIN4: return "WSIN4";
    }
    return "UNKNOWN";
}

/// One of the four lattice sums. The weight index m exists only for the
/// weighted pair (WSIN2/WSIN4) and must satisfy 1 <= m <= n-1.
class IdentityId {
public:
    IdentityId(IdentityTag tag, int n, std::optional<int> m = std::nullopt)
        : tag_(tag), n_(n), m_(m) {
        if (n < 2) {
            throw RangeError("IdentityId: n must be at least 2");
        }
        const bool weighted = tag == IdentityTag::WSIN2 || tag == IdentityTag::WSIN4;
        if (weighted) {
            if (!m) {
                throw RangeError("IdentityId: weighted identity requires m");
            }
            if (*m < 1 || *m > n - 1) {
                throw RangeError("IdentityId: m must lie in [1, n-1]");
            }
        } else if (m) {
            throw RangeError("IdentityId: unweighted identity takes no m");
        }
    }

    IdentityTag tag() const { return tag_; }
    int n() const { return n_; }
    std::optional<int> m() const { return m_; }

private:
    IdentityTag tag_;
    int n_;
    std::optional<int> m_;
};

/// Closed forms of the four sums over k = 1..n-1:
///   INV_SIN2: sum 1/sin^2(pi k/n)            = (n^2-1)/3
///   INV_SIN4: sum 1/sin^4(pi k/n)            = (n^2-1)(n^2+11)/45
///   WSIN2:    sum sin^2(m pi k/n)/sin^2(...) = m(n-m)
///   WSIN4:    sum sin^2(m pi k/n)/sin^4(...) = m^2(n-m)^2/3 + (2/3)m(n-m)
inline double closed_form(const IdentityId& id) {
    const double n = static_cast<double>(id.n());
    switch (id.tag()) {
        case IdentityTag::INV_SIN2:
            return (n * n - 1.0) / 3.0;
        case IdentityTag::INV_SIN4:
            return (n * n - 1.0) * (n * n + 11.0) / 45.0;
        case IdentityTag::WSIN2: {
            const double m = static_cast<double>(*id.m());
            return m * (n - m);
        }
        case IdentityTag::WSIN4: {
            const double m = static_cast<double>(*id.m());
            const double p = m * (n - m);
            return p * p / 3.0 + 2.0 / 3.0 * p;
        }
    }
    throw RangeError("closed_form: unknown identity tag");
}

/// Direct compensated summation of the defining series. The weighted
/// numerator is evaluated at (m k) mod n, which is exact in integers
/// and keeps the sin argument in [0, pi).
inline double brute_force(const IdentityId& id) {
    const int n = id.n();
    if (n > 1000000) {
        throw RangeError("brute_force: n exceeds the 1e6 runtime guard");
    }
    const bool weighted = id.tag() == IdentityTag::WSIN2 || id.tag() == IdentityTag::WSIN4;
    const bool fourth = id.tag() == IdentityTag::INV_SIN4 || id.tag() == IdentityTag::WSIN4;
    const std::int64_t m = weighted ? *id.m() : 0;
    KahanSum acc;
    for (int k = 1; k < n; ++k) {
        const double s = std::sin(kPi * k / n);
        double denom = s * s;
        if (fourth) denom *= denom;
        double numer = 1.0;
        if (weighted) {
            const std::int64_t r = (m * k) % n;
            const double sm = std::sin(kPi * static_cast<double>(r) / n);
            numer = sm * sm;
        }
        acc += numer / denom;
    }
    return acc.value();
}

}  // namespace repelcircle

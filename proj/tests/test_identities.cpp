#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <string>

#include "repelcircle/errors.hpp"
#include "repelcircle/identities.hpp"

using Catch::Approx;
using namespace repelcircle;

namespace {

double rel_gap(double closed, double brute) {
    return std::abs(closed - brute) / std::max(1.0, std::abs(closed));
}

}  // namespace

TEST_CASE("closed forms at small pinned cases", "[identities]") {
    REQUIRE(closed_form(IdentityId(IdentityTag::INV_SIN2, 2)) == 1.0);
    REQUIRE(closed_form(IdentityId(IdentityTag::INV_SIN2, 4)) == 5.0);
    REQUIRE(closed_form(IdentityId(IdentityTag::INV_SIN4, 3)) == Approx(32.0 / 9.0).epsilon(1e-14));
    REQUIRE(closed_form(IdentityId(IdentityTag::WSIN2, 3, 1)) == 2.0);
    REQUIRE(closed_form(IdentityId(IdentityTag::WSIN2, 5, 2)) == 6.0);
    REQUIRE(closed_form(IdentityId(IdentityTag::WSIN4, 3, 1)) == Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("brute sums reproduce the same pinned cases", "[identities]") {
    REQUIRE(brute_force(IdentityId(IdentityTag::INV_SIN2, 2)) == Approx(1.0).epsilon(1e-12));
    REQUIRE(brute_force(IdentityId(IdentityTag::INV_SIN4, 3)) == Approx(32.0 / 9.0).epsilon(1e-12));
    REQUIRE(brute_force(IdentityId(IdentityTag::WSIN2, 5, 2)) == Approx(6.0).epsilon(1e-12));
    REQUIRE(brute_force(IdentityId(IdentityTag::WSIN4, 3, 1)) == Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("closed and brute forms agree over a dense sweep", "[identities]") {
    for (int n = 2; n <= 40; ++n) {
        for (const auto tag : {IdentityTag::INV_SIN2, IdentityTag::INV_SIN4}) {
            const IdentityId id(tag, n);
            REQUIRE(rel_gap(closed_form(id), brute_force(id)) <= 1e-12);
        }
        for (int m = 1; m < n; ++m) {
            for (const auto tag : {IdentityTag::WSIN2, IdentityTag::WSIN4}) {
                const IdentityId id(tag, n, m);
                REQUIRE(rel_gap(closed_form(id), brute_force(id)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("weighted sums are symmetric under m -> n - m", "[identities]") {
    const int n = 12;
    for (int m = 1; m < n; ++m) {
        for (const auto tag : {IdentityTag::WSIN2, IdentityTag::WSIN4}) {
            const double a = closed_form(IdentityId(tag, n, m));
            const double b = closed_form(IdentityId(tag, n, n - m));
            REQUIRE(a == Approx(b).epsilon(1e-13));
            const double ba = brute_force(IdentityId(tag, n, m));
            const double bb = brute_force(IdentityId(tag, n, n - m));
            REQUIRE(ba == Approx(bb).epsilon(1e-12));
        }
    }
}

TEST_CASE("weighted second moments dominate the squared first moments", "[identities]") {
    // Cauchy-Schwarz with sin(m pi k / n) as the second factor, whose squares sum to n/2.
    const int n = 16;
    for (int m = 1; m < n; ++m) {
        const double w2 = closed_form(IdentityId(IdentityTag::WSIN2, n, m));
        const double w4 = closed_form(IdentityId(IdentityTag::WSIN4, n, m));
        REQUIRE(w2 * w2 <= w4 * (n / 2.0) * (1.0 + 1e-12));
    }
}

TEST_CASE("identity ids are validated", "[identities]") {
    REQUIRE_THROWS_AS(IdentityId(IdentityTag::INV_SIN2, 1), RangeError);
    REQUIRE_THROWS_AS(IdentityId(IdentityTag::WSIN2, 5), RangeError);
    REQUIRE_THROWS_AS(IdentityId(IdentityTag::WSIN2, 5, 0), RangeError);
    REQUIRE_THROWS_AS(IdentityId(IdentityTag::WSIN4, 5, 5), RangeError);
    REQUIRE_THROWS_AS(IdentityId(IdentityTag::INV_SIN2, 5, 2), RangeError);
    REQUIRE_THROWS_AS(brute_force(IdentityId(IdentityTag::INV_SIN2, 1000001)), RangeError);
}

TEST_CASE("identity tags have distinct labels", "[identities]") {
    REQUIRE(to_string(IdentityTag::INV_SIN2) != to_string(IdentityTag::INV_SIN4));
    REQUIRE(to_string(IdentityTag::WSIN2) != to_string(IdentityTag::WSIN4));
    REQUIRE_FALSE(to_string(IdentityTag::INV_SIN2).empty());
}

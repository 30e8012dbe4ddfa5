#pragma once

#include <cmath>

namespace repelcircle {

// Neumaier-compensated accumulator. `sum + comp` is the running total;
// `comp` carries the low-order bits a naive addition would drop, which
// matters for the O(n^2) pairwise sums at n up to a few thousand.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    KahanSum& operator+=(double v) {
        add(v);
        return *this;
    }

    double value() const { return sum + comp; }
};

}  // namespace repelcircle

#pragma once

#include <vector>

#include "repelcircle/ensemble.hpp"

namespace repelcircle {

/// Path values on the uniform grid t_g = 2 pi g / G, g = 0..G-1. The
/// right endpoint 2 pi is identified with t = 0 (periodic closure).
struct PathSample {
    int grid_points = 0;
    std::vector<double> values;

    double t(int g) const { return kTwoPi * g / grid_points; }
};

}  // namespace repelcircle

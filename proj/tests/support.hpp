#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "ringpair/mat2.hpp"

namespace testing {

inline double rel_err(double x, double ref) {
    if (x == ref) return 0.0;
    return std::abs(x - ref) / std::max(std::abs(x), std::abs(ref));
}

inline double rel_err(ringpair::cplx x, ringpair::cplx ref) {
    if (x == ref) return 0.0;
    return std::abs(x - ref) / std::max(std::abs(x), std::abs(ref));
}

}  // namespace testing

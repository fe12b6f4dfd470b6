#include "ringpair/mat2.hpp"

#include <algorithm>

namespace ringpair {

double max_relative_difference(const Mat2& x, const Mat2& y) {
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double scale = std::max(std::abs(x.m[k]), std::abs(y.m[k]));
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(x.m[k] - y.m[k]) / scale);
    }
    return worst;
}

double max_scaled_difference(const Mat2& x, const Mat2& y, const std::array<double, 4>& scale) {
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double s = std::max({std::abs(x.m[k]), std::abs(y.m[k]), scale[k]});
        if (s == 0.0) continue;
        worst = std::max(worst, std::abs(x.m[k] - y.m[k]) / s);
    }
    return worst;
}

}  // namespace ringpair

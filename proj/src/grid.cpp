#include "idie/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace idie {

std::size_t interval_count(double length, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    // 1.0 / 0.001 evaluates to 1000.0000000000001; do not round that up.
    const double raw = length / step;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-12))));
}

std::vector<double> aligned_grid(double a, double b, std::vector<double> breakpoints, double step) {
    std::erase_if(breakpoints, [&](double t) { return !(t > a && t < b); });
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    std::vector<double> nodes{a};
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double lo = breakpoints[p];
        const double hi = breakpoints[p + 1];
        const std::size_t n = interval_count(hi - lo, step);
        for (std::size_t i = 1; i < n; ++i)
            nodes.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
        nodes.push_back(hi);
    }
    return nodes;
}

}  // namespace idie

#pragma once

#include <cstddef>
#include <vector>

namespace idie {

/// Number of equal subintervals of spacing at most `step` covering `length`.
std::size_t interval_count(double length, double step);

/// Nodes on [a, b] containing a, b and every breakpoint strictly inside;
/// each piece between consecutive breakpoints is split uniformly with
/// spacing at most `step`.
std::vector<double> aligned_grid(double a, double b, std::vector<double> breakpoints, double step);

}  // namespace idie

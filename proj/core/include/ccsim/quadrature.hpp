#pragma once

#include <span>

namespace ccsim {

/// Composite Simpson rule on uniformly spaced samples; when the interval
/// count is odd the last three intervals use the 3/8 rule. n >= 2.
double integrate_uniform(std::span<const double> f, double h);

/// Neumaier-compensated summation.
double stable_sum(std::span<const double> v);

} // namespace ccsim

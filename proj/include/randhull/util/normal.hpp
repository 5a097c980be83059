#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

namespace randhull::util {

/// Standard normal distribution function.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Standard normal quantile, p in (0,1).
inline double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, p);
}

}  // namespace randhull::util

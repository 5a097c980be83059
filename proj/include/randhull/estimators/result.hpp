#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include "randhull/core.hpp"

namespace randhull::estimators {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Monte Carlo mean with sample standard error and a 95% normal interval.
struct EstimateResult {
    double value = 0.0;
    std::uint64_t trials = 0;
    double stderr = 0.0;  // sample standard deviation / sqrt(trials)
    Interval ci95;
    std::uint64_t seed = 0;
};

/// Builds an EstimateResult from the sum and sum of squares of per-trial
/// values; the interval is clipped to [lo, hi].
inline EstimateResult make_estimate(double sum, double sum_sq, std::uint64_t trials, std::uint64_t seed,
                                    double lo = 0.0, double hi = 1.0) {
    if (trials == 0) throw invalid_input("make_estimate: zero trials");
    EstimateResult r;
    const double t = static_cast<double>(trials);
    r.value = sum / t;
    r.trials = trials;
    r.seed = seed;
    const double var = trials > 1 ? std::max(0.0, (sum_sq - sum * sum / t) / (t - 1.0)) : 0.0;
    r.stderr = std::sqrt(var / t);
    r.ci95 = {std::clamp(r.value - 1.96 * r.stderr, lo, hi), std::clamp(r.value + 1.96 * r.stderr, lo, hi)};
    return r;
}

/// Estimate of a proportion from integer counts (exact sums, no rounding drift).
inline EstimateResult proportion(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
    const double h = static_cast<double>(hits);
    return make_estimate(h, h, trials, seed);
}

inline constexpr std::uint64_t unbounded = std::numeric_limits<std::uint64_t>::max();

/// With probability at least `confidence`, N_X lies in [lower, upper].
/// `upper == unbounded` means no finite upper end was certified.
struct NxBracket {
    std::uint64_t lower = 1;
    std::uint64_t upper = unbounded;
    double confidence = 0.0;
    bool widened = false;  // some comparison ended inconclusive

    bool contains(std::uint64_t n) const noexcept { return lower <= n && n <= upper; }
};

}  // namespace randhull::estimators

#pragma once

// Tukey halfspace depth alpha^eps(theta) = inf_{|c|=1} P(<c, X - theta> <= eps):
// a sampled-direction upper estimate in any dimension and an exact sweep for
// weighted planar point sets.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "randhull/dist/sample.hpp"
#include "randhull/estimators/result.hpp"
#include "randhull/util/parallel.hpp"

namespace randhull::estimators {

struct TukeyResult {
    EstimateResult estimate;  // re-measured at the argmin direction on a fresh sample
    double scan_min = 0.0;    // minimum over directions on the scanning sample (biased low)
    Vector direction;
};

/// Scans `n_directions` uniform unit directions on one sample of `n_samples`
/// draws, then re-estimates the minimizing direction on an independent sample.
inline TukeyResult estimate_tukey_mc(const dist::DistributionSpec& spec, std::span<const double> theta,
                                     double epsilon, std::size_t n_directions, std::size_t n_samples,
                                     const random::RngStream& stream, unsigned threads = 1) {
    const std::size_t d = spec.dim();
    if (theta.size() != d) throw invalid_input("estimate_tukey_mc: theta dimension does not match spec");
    if (n_directions == 0) throw invalid_input("estimate_tukey_mc: at least one direction required");
    if (n_samples < 100) throw invalid_input("estimate_tukey_mc: at least 100 samples required");
    if (!(epsilon >= 0.0)) throw invalid_input("estimate_tukey_mc: epsilon must be nonnegative");

    random::RngStream sample_rng = stream.substream(0);
    random::RngStream dir_rng = stream.substream(1);
    random::RngStream fresh_rng = stream.substream(2);
    PointSet x = dist::sample(spec, n_samples, sample_rng);
    for (std::size_t i = 0; i < n_samples; ++i)
        for (std::size_t k = 0; k < d; ++k) x.mutable_point(i)[k] -= theta[k];

    std::vector<Vector> dirs(n_directions);
    for (auto& c : dirs) c = dist::sample_direction(dir_rng, d);
    std::vector<std::size_t> counts(n_directions);
    util::parallel_for(n_directions, threads, [&](std::size_t j) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < n_samples; ++i) c += dot(dirs[j], x[i]) <= epsilon;
        counts[j] = c;
    });
    const std::size_t best = static_cast<std::size_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());

    const PointSet y = dist::sample(spec, n_samples, fresh_rng);
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += dirs[best][k] * (y[i][k] - theta[k]);
        hits += s <= epsilon;
    }
    TukeyResult out;
    out.estimate = proportion(hits, n_samples, stream.seed());
    out.scan_min = static_cast<double>(counts[best]) / static_cast<double>(n_samples);
    out.direction = dirs[best];
    return out;
}

/// Exact depth of theta in a weighted planar measure: the least mass of a
/// closed halfplane whose boundary passes through theta.
///
/// Equivalently the least mass of a closed half-circle of directions of x - theta
/// (atoms at theta always count). The mass is constant between consecutive
/// critical angles phi_i and phi_i - pi, and minimal on those open gaps, so it
/// is evaluated at every gap midpoint with prefix sums: O(n log n).
inline double empirical_tukey_2d(const WeightedMeasure& measure, std::span<const double> theta) {
    if (measure.dim() != 2) throw invalid_input("empirical_tukey_2d: measure must be planar");
    if (theta.size() != 2) throw invalid_input("empirical_tukey_2d: theta must be planar");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double gap_tol = 1e-12;

    double at_theta = 0.0;
    std::vector<std::pair<double, double>> atoms;  // (angle in [0, 2pi), weight)
    const auto& s = measure.support();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double vx = s[i][0] - theta[0], vy = s[i][1] - theta[1];
        if (vx == 0.0 && vy == 0.0) {
            at_theta += measure.weights()[i];
            continue;
        }
        double a = std::atan2(vy, vx);
        if (a < 0.0) a += two_pi;
        if (a >= two_pi) a -= two_pi;
        atoms.emplace_back(a, measure.weights()[i]);
    }
    if (atoms.empty()) return std::min(1.0, at_theta);
    std::sort(atoms.begin(), atoms.end());
    const std::size_t n = atoms.size();
    std::vector<double> angle(n), prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        angle[i] = atoms[i].first;
        prefix[i + 1] = prefix[i] + atoms[i].second;
    }
    // Mass of atoms with angle in [a, b], 0 <= a <= b < 2pi.
    auto mass = [&](double a, double b) {
        const auto lo = std::lower_bound(angle.begin(), angle.end(), a) - angle.begin();
        const auto hi = std::upper_bound(angle.begin(), angle.end(), b) - angle.begin();
        return hi > lo ? prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)] : 0.0;
    };
    auto half_circle = [&](double beta) {
        const double end = beta + std::numbers::pi;
        if (end < two_pi) return mass(beta, end);
        return mass(beta, two_pi) + mass(0.0, end - two_pi);
    };

    std::vector<double> critical;
    critical.reserve(2 * n);
    for (double a : angle) {
        critical.push_back(a);
        critical.push_back(a >= std::numbers::pi ? a - std::numbers::pi : a + std::numbers::pi);
    }
    std::sort(critical.begin(), critical.end());
    std::vector<double> distinct;
    for (double c : critical)
        if (distinct.empty() || c - distinct.back() > gap_tol) distinct.push_back(c);
    if (distinct.size() > 1 && distinct.front() + two_pi - distinct.back() <= gap_tol) distinct.pop_back();

    double best = 1.0;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        const double a = distinct[i];
        const double b = i + 1 < distinct.size() ? distinct[i + 1] : distinct.front() + two_pi;
        double mid = 0.5 * (a + b);
        if (mid >= two_pi) mid -= two_pi;
        best = std::min(best, half_circle(mid));
    }
    return std::min(1.0, best + at_theta);
}

}  // namespace randhull::estimators

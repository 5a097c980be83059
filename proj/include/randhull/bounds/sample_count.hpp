#pragma once

// Bounds on N_X (the least n with p_n >= 1/2), on the interior-inclusion sample
// size, and Berry-Esseen type gaps.

#include <cmath>
#include <optional>

#include "randhull/bounds/report.hpp"
#include "randhull/core.hpp"
#include "randhull/geom/whiten.hpp"

namespace randhull::bounds {

/// 1/(2 alpha) <= N_X <= ceil(3d/alpha).
inline BoundReport nx_depth_bounds(double alpha, std::uint64_t d) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw invalid_input("nx_depth_bounds: alpha must lie in [0,1]");
    if (d == 0) throw invalid_input("nx_depth_bounds: d must be positive");
    BoundReport r;
    const double dd = static_cast<double>(d);
    if (alpha == 0.0) {
        r.add("N_lower", 1.0, BoundKind::lower, "depth sandwich, N_X >= 1/(2 alpha)", "alpha = 0");
        r.add("N_upper", infinity, BoundKind::upper, "depth sandwich, N_X <= ceil(3d/alpha)",
              "alpha = 0: no finite bound");
        r.add("n_p_exceeds_1_minus_2^-d", infinity, BoundKind::upper,
              "p_n > 1 - 2^{-d} for n >= 3d/alpha", "alpha = 0");
        return r;
    }
    r.add("N_lower", std::max(1.0, ceil_tol(1.0 / (2.0 * alpha))), BoundKind::lower,
          "depth sandwich, N_X >= 1/(2 alpha)");
    r.add("N_upper", ceil_tol(3.0 * dd / alpha), BoundKind::upper,
          "depth sandwich, N_X <= ceil(3d/alpha)");
    r.add("n_p_exceeds_1_minus_2^-d", ceil_tol(3.0 * dd / alpha), BoundKind::upper,
          "p_n > 1 - 2^{-d} for n >= 3d/alpha");
    return r;
}

/// Smallest n >= 3 with n / (1 + log n)^2 >= rhs (the left side increases for n >= e).
inline double smallest_n_log_ratio(double rhs) {
    auto f = [](double n) { return n / ((1.0 + std::log(n)) * (1.0 + std::log(n))); };
    double lo = 3.0, hi = 4.0;
    if (f(lo) >= rhs) return lo;
    while (f(hi) < rhs) hi *= 2.0;
    while (hi - lo > 1.0) {
        const double mid = std::floor((lo + hi) / 2.0);
        if (f(mid) >= rhs)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// Moment-based upper bounds on N_X. Entries whose inputs are absent are skipped.
inline BoundReport nx_moment_bounds(std::uint64_t d, const geom::MomentData& m) {
    const double dd = static_cast<double>(d);
    BoundReport r;
    if (m.norm_bound) {
        const double b2 = *m.norm_bound * *m.norm_bound;
        r.add("bounded_alpha_lower", 1.0 / (2.0 * b2), BoundKind::lower,
              "bounded whitened norm, alpha_X >= 1/(2B^2)");
        r.add("bounded_N_upper", ceil_tol(6.0 * dd * b2), BoundKind::upper,
              "bounded whitened norm, N_X <= ceil(6dB^2)");
    }
    if (m.rho3) {
        r.add("main_be", 17.0 * dd * (1.0 + 2.25 * *m.rho3 * *m.rho3), BoundKind::upper,
              "Berry-Esseen, N_X <= 17d(1 + 9/4 rho3^2)");
    }
    if (m.m3) {
        r.add("cor_m3", 17.0 * dd * (1.0 + 2.25 * *m.m3 * *m.m3), BoundKind::upper,
              "corollary, 17d(1 + 9/4 E||V^{-1/2}X||^3 ^2)");
        const double c = 42.0 * std::pow(dd, 0.25) + 16.0;
        r.add("thm_first", 8.0 * dd * (1.0 + 36.0 * dd * dd * c * c * *m.m3 * *m.m3), BoundKind::upper,
              "multivariate Berry-Esseen, 8d(1 + 36d^2(42d^{1/4}+16)^2 m3^2)");
    }
    if (m.m4) {
        r.add("cor_m4", 17.0 * dd * (1.0 + 2.25 * *m.m4), BoundKind::upper,
              "corollary, 17d(1 + 9/4 E||V^{-1/2}X||^4)");
    }
    if (m.norm_bound) {
        const double b2 = *m.norm_bound * *m.norm_bound;
        const double rhs = std::ldexp(100.0, 16) * std::pow(dd, 6.5) * b2;
        r.add("prop_second", 6.0 * dd * smallest_n_log_ratio(rhs), BoundKind::upper,
              "Wasserstein route, N_X <= 6d n*, n*/(1+log n*)^2 >= 2^16 100 d^{13/2} B^2");
    }
    if (r.entries.empty()) throw invalid_input("nx_moment_bounds: no computable entry");
    return r;
}

/// Smallest n with n >= (2d/alpha) max{log(1/delta)/d + log(1/eps), 6}.
inline std::uint64_t interior_sample_size(std::uint64_t d, double alpha, double delta, double eps) {
    for (double v : {alpha, delta, eps})
        if (!(v > 0.0 && v < 1.0)) throw invalid_input("interior_sample_size: parameters must lie in (0,1)");
    const double dd = static_cast<double>(d);
    const double inner = std::max(std::log(1.0 / delta) / dd + std::log(1.0 / eps), 6.0);
    return static_cast<std::uint64_t>(ceil_tol(2.0 * dd / alpha * inner));
}

/// Failure-probability bound exp(-0.45 e^{-beta} n^{1-beta} d^beta) for the
/// half-body inclusion at alpha = (en/d)^{-beta}; absent below the threshold
/// n >= (12 e^beta)^{1/(1-beta)} d.
inline std::optional<double> interior_corollary_failure(std::uint64_t n, std::uint64_t d, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw invalid_input("interior_corollary_failure: beta must lie in (0,1)");
    const double nd = static_cast<double>(n), dd = static_cast<double>(d);
    if (nd < std::pow(12.0 * std::exp(beta), 1.0 / (1.0 - beta)) * dd) return std::nullopt;
    return std::exp(-0.45 * std::exp(-beta) * std::pow(nd, 1.0 - beta) * std::pow(dd, beta));
}

inline double interior_corollary_alpha(std::uint64_t n, std::uint64_t d, double beta) {
    return std::pow(std::exp(1.0) * static_cast<double>(n) / static_cast<double>(d), -beta);
}

struct GapInputs {
    std::optional<double> rho3;
    std::optional<double> m3;
    std::optional<double> norm_bound;
    std::vector<double> zhai_eps;  // smoothing radii for the W2 -> probability correction
};

/// Berry-Esseen type gaps at sample size n.
inline BoundReport be_gaps(std::uint64_t n, std::uint64_t d, const GapInputs& in) {
    if (n == 0) throw invalid_input("be_gaps: n must be positive");
    const double nd = static_cast<double>(n), dd = static_cast<double>(d), sq = std::sqrt(nd);
    BoundReport r;
    if (in.rho3) r.add("korolev", 0.4784 * *in.rho3 / sq, BoundKind::upper, "one-dimensional Berry-Esseen, 0.4784 rho3/sqrt(n)");
    if (in.m3)
        r.add("raic", (42.0 * std::pow(dd, 0.25) + 16.0) * *in.m3 / sq, BoundKind::upper,
              "convex-set Berry-Esseen, (42d^{1/4}+16) m3/sqrt(n)");
    if (in.norm_bound) {
        const double w2 = 5.0 * std::sqrt(dd) * *in.norm_bound * (1.0 + std::log(nd)) / sq;
        r.add("zhai_w2", w2, BoundKind::upper, "Wasserstein-2 CLT, 5 sqrt(d) B (1+log n)/sqrt(n)");
        for (double e : in.zhai_eps) {
            if (!(e > 0.0)) throw invalid_input("be_gaps: smoothing radius must be positive");
            r.add("zhai_correction@" + std::to_string(e), w2 * w2 / (e * e), BoundKind::upper,
                  "probability correction W2^2/eps^2");
        }
    }
    return r;
}

}  // namespace randhull::bounds

#pragma once

// Closed forms for the containment probability p_n: the balanced (Wendel)
// value, subset-counting sandwiches, and the depth recursion g_{d,n}.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "randhull/bounds/report.hpp"
#include "randhull/core.hpp"

namespace randhull::bounds {

inline double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    if (n < 64) {
        k = std::min(k, n - k);
        std::uint64_t c = 1;
        for (std::uint64_t i = 1; i <= k; ++i)  // exact at every step; the product needs 128 bits
            c = static_cast<std::uint64_t>(static_cast<unsigned __int128>(c) * (n - k + i) / i);
        return static_cast<double>(c);
    }
    return std::exp(log_binomial(static_cast<double>(n), static_cast<double>(k)));
}

/// 1 - 2^{-(n-1)} sum_{i<d} C(n-1, i): p_n(0) for symmetric X in general
/// position, and the universal upper bound for absolutely continuous X.
inline double wendel_exact(std::uint64_t n, std::uint64_t d) {
    if (n == 0 || d == 0) throw invalid_input("wendel_exact: n and d must be positive");
    const std::uint64_t m = n - 1;
    if (d > m) return 0.0;
    if (m < 64) {
        // Exact integers: 2^m - sum_{i<d} C(m,i) = sum_{i>=d} C(m,i).
        std::uint64_t tail = 0, c = 1;
        for (std::uint64_t i = 0; i <= m; ++i) {
            if (i >= d) tail += c;
            if (i < m) c = static_cast<std::uint64_t>(static_cast<unsigned __int128>(c) * (m - i) / (i + 1));
        }
        return std::ldexp(static_cast<double>(tail), -static_cast<int>(m));
    }
    // Log space; sum the smaller of the two tails.
    const double log2 = std::log(2.0);
    CompensatedSum s;
    if (d <= m / 2) {
        for (std::uint64_t i = 0; i < d; ++i)
            s.add(std::exp(log_binomial(static_cast<double>(m), static_cast<double>(i)) - m * log2));
        return 1.0 - s.value();
    }
    for (std::uint64_t i = d; i <= m; ++i)
        s.add(std::exp(log_binomial(static_cast<double>(m), static_cast<double>(i)) - m * log2));
    return s.value();
}

/// Bounds on p_n from p_m, n >= m >= d+1.
inline BoundReport sandwich_bounds(double p_m, std::uint64_t m, std::uint64_t n, std::uint64_t d) {
    if (!(m >= d + 1 && n >= m)) throw invalid_input("sandwich_bounds: require n >= m >= d+1");
    if (!(p_m >= 0.0 && p_m <= 1.0)) throw invalid_input("sandwich_bounds: p_m must lie in [0,1]");
    const double ratio = binomial(n, d + 1) / binomial(m, d + 1);
    BoundReport r;
    r.add("ratio_lower", std::ldexp(ratio * p_m, -static_cast<int>(n - m)), BoundKind::lower,
          "ratio sandwich, 2^{m-n} C(n,d+1)/C(m,d+1) p_m");
    r.add("ratio_upper", std::min(1.0, ratio * p_m), BoundKind::upper,
          "ratio sandwich, C(n,d+1)/C(m,d+1) p_m");
    r.add("naive_upper", std::min(1.0, binomial(n, m) * p_m), BoundKind::upper,
          "subset counting, C(n,m) p_m");
    r.add("naive_N_upper", p_m > 0.0 ? static_cast<double>(m) / p_m : infinity, BoundKind::upper,
          "subset counting, N_X <= m / p_m");
    return r;
}

/// The recursion g_{d,n}(alpha): 1 for n <= d, then min{1, n(1-alpha)/(n-d) g_{d,n-1}}.
inline double g_recursion(std::uint64_t d, std::uint64_t n, double alpha) {
    double g = 1.0;
    for (std::uint64_t k = d + 1; k <= n; ++k)
        g = std::min(1.0, static_cast<double>(k) * (1.0 - alpha) / static_cast<double>(k - d) * g);
    return g;
}

/// Closed-form majorant of g_{d,n}(alpha), valid for n >= d/alpha.
inline double g_closed_form(std::uint64_t d, std::uint64_t n, double alpha) {
    const double x = static_cast<double>(n) * alpha / static_cast<double>(d);
    const double rate = std::log1p(-alpha) / -alpha;  // (1/alpha) log(1/(1-alpha))
    return std::exp(static_cast<double>(d) * (std::log(x) + rate * (1.0 + alpha - x)));
}

/// Looser majorant, valid for n >= (1+alpha) d / alpha.
inline double g_simplified(std::uint64_t d, std::uint64_t n, double alpha) {
    const double x = static_cast<double>(n) * alpha / static_cast<double>(d);
    return std::exp(static_cast<double>(d) * (std::log(x) + 1.0 + alpha - x));
}

/// Bounds on 1 - p^eps_n in terms of the relaxed depth alpha.
inline BoundReport g_bounds(std::uint64_t d, std::uint64_t n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("g_bounds: alpha must lie in (0,1)");
    if (n == 0 || d == 0) throw invalid_input("g_bounds: n and d must be positive");
    const double nd = static_cast<double>(n), dd = static_cast<double>(d);
    BoundReport r;
    r.add("g_recursion", g_recursion(d, n, alpha), BoundKind::upper, "depth recursion g_{d,n}");
    if (nd >= dd / alpha * (1.0 - 1e-12))
        r.add("closed_form", g_closed_form(d, n, alpha), BoundKind::upper,
              "closed form, n >= d/alpha");
    if (nd >= (1.0 + alpha) * dd / alpha * (1.0 - 1e-12))
        r.add("simplified", g_simplified(d, n, alpha), BoundKind::upper,
              "simplified closed form, n >= (1+alpha)d/alpha");
    r.add("lower", std::pow(1.0 - alpha, nd), BoundKind::lower, "separating hyperplane, (1-alpha)^n");
    return r;
}

}  // namespace randhull::bounds

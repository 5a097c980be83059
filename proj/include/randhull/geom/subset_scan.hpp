#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "randhull/core.hpp"
#include "randhull/geom/min_norm.hpp"

namespace randhull::geom {

struct SubsetScanResult {
    double min_distance = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> argmin;  // the minimizing k-subset
    std::size_t subsets = 0;
};

inline double binomial_count(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

/// Minimum over all k-subsets of dist(theta, conv(subset)), each via min_norm_point.
inline SubsetScanResult degenerate_subset_scan(const PointSet& points, std::span<const double> theta,
                                               std::size_t k, double budget = 1e6,
                                               double tol = default_tol) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) throw invalid_input("degenerate_subset_scan: need 1 <= k <= n");
    if (theta.size() != points.dim())
        throw invalid_input("degenerate_subset_scan: theta dimension does not match points");
    if (binomial_count(n, k) > budget)
        throw budget_error("degenerate_subset_scan: C(n,k) exceeds the combinatorial budget");

    const PointSet shifted = points.translated(theta);
    SubsetScanResult res;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        const double dist = min_norm_point(shifted.subset(idx), tol).distance;
        ++res.subsets;
        if (dist < res.min_distance) {
            res.min_distance = dist;
            res.argmin = idx;
        }
        // next combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return res;
}

}  // namespace randhull::geom

#pragma once

// Caratheodory reduction of a discrete measure to at most dim+1 atoms with the
// same mean.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "randhull/core.hpp"
#include "randhull/geom/min_norm.hpp"

namespace randhull::geom {

class reduction_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

namespace detail {

// Unit null vector of the (d+1) x m matrix [points; 1...1] restricted to
// `cols`, from a column-pivoted QR of its transpose.
inline Eigen::VectorXd affine_null_vector(const PointSet& pts,
                                          const std::vector<std::size_t>& cols) {
    const auto d = static_cast<Eigen::Index>(pts.dim());
    const auto m = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd at(m, d + 1);
    for (Eigen::Index j = 0; j < m; ++j) {
        auto p = pts[cols[static_cast<std::size_t>(j)]];
        for (Eigen::Index k = 0; k < d; ++k) at(j, k) = p[static_cast<std::size_t>(k)];
        at(j, d) = 1.0;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
    const Eigen::MatrixXd q = qr.householderQ();
    return q.col(m - 1);
}

}  // namespace detail

struct Reduction {
    std::vector<std::size_t> indices;  // surviving atoms, increasing
    Vector weights;                    // normalized
};

/// As caratheodory_reduce, but reports which input atoms survive.
inline Reduction caratheodory_reduce_indices(const WeightedMeasure& measure, double tol = default_tol) {
    const std::size_t d = measure.dim();
    const std::size_t n = measure.size();
    if (n <= d + 1) {
        Reduction r;
        for (std::size_t i = 0; i < n; ++i) r.indices.push_back(i);
        r.weights = measure.weights();
        return r;
    }

    const PointSet& pts = measure.support();
    std::vector<double> w = measure.weights();
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] > 0.0) live.push_back(i);

    std::size_t head = 0;  // rotates the elimination window on retries
    while (live.size() > d + 1) {
        bool eliminated = false;
        for (std::size_t attempt = 0; attempt < live.size() && !eliminated; ++attempt) {
            std::vector<std::size_t> cols;
            for (std::size_t j = 0; j < d + 2; ++j)
                cols.push_back(live[(head + attempt + j) % live.size()]);
            std::sort(cols.begin(), cols.end());
            const Eigen::VectorXd v = detail::affine_null_vector(pts, cols);

            // Residual check on the null direction.
            double resid = std::abs(v.sum());
            for (std::size_t k = 0; k < d; ++k) {
                double s = 0.0;
                for (std::size_t j = 0; j < cols.size(); ++j)
                    s += v(static_cast<Eigen::Index>(j)) * pts[cols[j]][k];
                resid = std::max(resid, std::abs(s));
            }
            if (resid > 1e-8 * (1.0 + v.cwiseAbs().maxCoeff())) continue;

            double step = std::numeric_limits<double>::infinity();
            std::size_t leave = cols.size();
            for (std::size_t j = 0; j < cols.size(); ++j) {
                const double vj = v(static_cast<Eigen::Index>(j));
                if (vj <= 1e-14) continue;
                const double ratio = w[cols[j]] / vj;
                if (ratio < step) {
                    step = ratio;
                    leave = j;
                }
            }
            if (leave == cols.size()) continue;
            for (std::size_t j = 0; j < cols.size(); ++j)
                w[cols[j]] = std::max(0.0, w[cols[j]] - step * v(static_cast<Eigen::Index>(j)));
            w[cols[leave]] = 0.0;
            eliminated = true;
        }
        if (!eliminated)
            throw reduction_error("caratheodory_reduce: singular elimination step");
        std::vector<std::size_t> next;
        for (auto i : live)
            if (w[i] > 0.0) next.push_back(i);
        live = std::move(next);
        ++head;
    }

    double total = 0.0;
    for (auto i : live) total += w[i];
    Reduction r;
    for (auto i : live) r.weights.push_back(w[i] / total);
    r.indices = std::move(live);

    WeightedMeasure out(pts.subset(r.indices), r.weights, 1e-9);
    const Vector before = measure.mean();
    const Vector after = out.mean();
    for (std::size_t k = 0; k < d; ++k)
        if (std::abs(before[k] - after[k]) > tol)
            throw reduction_error("caratheodory_reduce: mean drift exceeds tolerance");
    return r;
}

/// Reduce `measure` to at most dim+1 support points with the same mean.
///
/// Each elimination step takes dim+2 live atoms, moves along a null direction
/// of their affine moment matrix and drops the atom whose weight reaches zero
/// first (lowest index on ties). The output support is a subset of the input
/// support.
inline WeightedMeasure caratheodory_reduce(const WeightedMeasure& measure, double tol = default_tol) {
    if (measure.size() <= measure.dim() + 1) return measure;
    Reduction r = caratheodory_reduce_indices(measure, tol);
    return WeightedMeasure(measure.support().subset(r.indices), std::move(r.weights), 1e-9);
}

/// Solve for barycentric weights of `target` over `support` (least squares on
/// the affine system). Returns nullopt if any weight is clearly negative.
inline std::optional<Vector> barycentric_weights(const PointSet& support,
                                                 std::span<const double> target) {
    const auto d = static_cast<Eigen::Index>(support.dim());
    const auto m = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd a(d + 1, m);
    Eigen::VectorXd b(d + 1);
    for (Eigen::Index j = 0; j < m; ++j) {
        auto p = support[static_cast<std::size_t>(j)];
        for (Eigen::Index k = 0; k < d; ++k) a(k, j) = p[static_cast<std::size_t>(k)];
        a(d, j) = 1.0;
    }
    for (Eigen::Index k = 0; k < d; ++k) b(k) = target[static_cast<std::size_t>(k)];
    b(d) = 1.0;
    const Eigen::VectorXd x = a.completeOrthogonalDecomposition().solve(b);
    Vector w(static_cast<std::size_t>(m));
    double total = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        if (x(j) < -1e-10) return std::nullopt;
        w[static_cast<std::size_t>(j)] = std::max(0.0, x(j));
        total += w[static_cast<std::size_t>(j)];
    }
    for (double& v : w) v /= total;
    return w;
}

}  // namespace randhull::geom

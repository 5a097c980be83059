#pragma once

// Minimum-norm point of a convex hull (Wolfe's active-set method) and the
// hull membership test built on it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randhull/core.hpp"

namespace randhull::geom {

inline constexpr double default_tol = 1e-9;
inline constexpr double default_weight_tol = 1e-12;

struct MinNormResult {
    Vector point;         // the minimizer h
    Vector coefficients;  // convex weights over the input points
    double distance = 0.0;
    int iterations = 0;
};

class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, MinNormResult best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const MinNormResult& best() const noexcept { return best_; }

private:
    MinNormResult best_;
};

namespace detail {

// Active set ("corral") with barycentric weights.
struct Corral {
    std::vector<std::size_t> idx;
    std::vector<double> lambda;
};

inline Vector combine(const PointSet& pts, const Corral& c) {
    Vector x(pts.dim(), 0.0);
    for (std::size_t s = 0; s < c.idx.size(); ++s) {
        auto p = pts[c.idx[s]];
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += c.lambda[s] * p[k];
    }
    return x;
}

// Minimizer of ||y|| over the affine hull of the corral points. Writes the
// affine coefficients into alpha.
inline void affine_minimizer(const PointSet& pts, const std::vector<std::size_t>& idx,
                             std::vector<double>& alpha) {
    const std::size_t k = idx.size();
    alpha.assign(k, 0.0);
    if (k == 1) {
        alpha[0] = 1.0;
        return;
    }
    const std::size_t d = pts.dim();
    Eigen::Map<const Eigen::VectorXd> base(pts[idx[0]].data(), static_cast<Eigen::Index>(d));
    Eigen::MatrixXd diff(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k - 1));
    for (std::size_t j = 1; j < k; ++j) {
        Eigen::Map<const Eigen::VectorXd> pj(pts[idx[j]].data(), static_cast<Eigen::Index>(d));
        diff.col(static_cast<Eigen::Index>(j - 1)) = pj - base;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(diff);
    cod.setThreshold(1e-13);
    const Eigen::VectorXd beta = cod.solve(-base);
    double rest = 1.0;
    for (std::size_t j = 1; j < k; ++j) {
        alpha[j] = beta(static_cast<Eigen::Index>(j - 1));
        rest -= alpha[j];
    }
    alpha[0] = rest;
}

inline MinNormResult finish(const PointSet& pts, const Corral& c, int iterations) {
    MinNormResult r;
    r.coefficients.assign(pts.size(), 0.0);
    for (std::size_t s = 0; s < c.idx.size(); ++s) r.coefficients[c.idx[s]] += c.lambda[s];
    r.point = combine(pts, c);
    r.distance = norm(r.point);
    r.iterations = iterations;
    return r;
}

}  // namespace detail

/// Warm start for min_norm_point: a convex combination over a subset of the
/// input points (typically the result for a prefix of the same points).
struct WarmStart {
    std::vector<std::size_t> indices;
    std::vector<double> weights;

    static WarmStart from(const MinNormResult& r) {
        WarmStart w;
        for (std::size_t i = 0; i < r.coefficients.size(); ++i)
            if (r.coefficients[i] > 0.0) {
                w.indices.push_back(i);
                w.weights.push_back(r.coefficients[i]);
            }
        return w;
    }
};

/// Point of the convex hull of `points` closest to the origin.
///
/// The returned distance is within `tol` of the true distance. Ties on the
/// entering point are broken by lowest index; the iteration cap is 100*n*d.
inline MinNormResult min_norm_point(const PointSet& points, double tol = default_tol,
                                    const WarmStart* warm = nullptr) {
    if (points.empty()) throw invalid_input("min_norm_point: empty point set");
    if (!(tol > 0.0)) throw invalid_input("min_norm_point: tol must be positive");
    const std::size_t n = points.size();
    const std::size_t d = points.dim();
    const int cap = static_cast<int>(std::max<std::size_t>(100 * n * d, 100));

    detail::Corral corral;
    if (warm != nullptr && !warm->indices.empty()) {
        double total = 0.0;
        for (std::size_t s = 0; s < warm->indices.size(); ++s) {
            if (warm->indices[s] >= n) throw invalid_input("min_norm_point: warm start index");
            if (warm->weights[s] <= 0.0) continue;
            corral.idx.push_back(warm->indices[s]);
            corral.lambda.push_back(warm->weights[s]);
            total += warm->weights[s];
        }
        for (double& l : corral.lambda) l /= total;
    }
    if (corral.idx.empty()) {
        std::size_t best = 0;
        double best_sq = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double sq = dot(points[i], points[i]);
            if (sq < best_sq) {
                best_sq = sq;
                best = i;
            }
        }
        corral.idx = {best};
        corral.lambda = {1.0};
    }

    Vector x = detail::combine(points, corral);
    std::vector<double> alpha;
    int iterations = 0;

    while (true) {
        const double xnorm = norm(x);
        if (xnorm <= tol) break;

        std::size_t entering = 0;
        double best_ip = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double ip = dot(x, points[i]);
            if (ip < best_ip) {
                best_ip = ip;
                entering = i;
            }
        }
        // Every hull point q satisfies <x/|x|, q> >= best_ip/|x|, which lower-bounds the distance.
        const double lower = std::max(0.0, best_ip / xnorm);
        if (xnorm - lower <= tol) break;
        if (std::find(corral.idx.begin(), corral.idx.end(), entering) != corral.idx.end()) break;

        corral.idx.push_back(entering);
        corral.lambda.push_back(0.0);

        // Minor cycle.
        while (true) {
            if (++iterations > cap)
                throw convergence_error("min_norm_point: iteration cap exceeded",
                                        detail::finish(points, corral, iterations));
            detail::affine_minimizer(points, corral.idx, alpha);
            const bool interior = std::all_of(alpha.begin(), alpha.end(),
                                              [](double a) { return a > default_weight_tol; });
            if (interior) {
                corral.lambda = alpha;
                x = detail::combine(points, corral);
                break;
            }
            double step = 1.0;
            std::size_t blocking = alpha.size();
            for (std::size_t s = 0; s < alpha.size(); ++s)
                if (alpha[s] <= default_weight_tol) {
                    const double denom = corral.lambda[s] - alpha[s];
                    if (denom <= 0.0) continue;
                    const double ratio = corral.lambda[s] / denom;
                    if (ratio < step || blocking == alpha.size()) {
                        step = std::min(step, ratio);
                        blocking = s;
                    }
                }
            for (std::size_t s = 0; s < alpha.size(); ++s)
                corral.lambda[s] = (1.0 - step) * corral.lambda[s] + step * alpha[s];
            if (blocking < alpha.size()) corral.lambda[blocking] = 0.0;
            detail::Corral kept;
            for (std::size_t s = 0; s < corral.idx.size(); ++s) {
                if (corral.lambda[s] <= default_weight_tol) continue;
                kept.idx.push_back(corral.idx[s]);
                kept.lambda.push_back(corral.lambda[s]);
            }
            if (kept.idx.empty()) {
                kept.idx = {corral.idx.front()};
                kept.lambda = {1.0};
            }
            corral = std::move(kept);
            const double total = std::accumulate(corral.lambda.begin(), corral.lambda.end(), 0.0);
            for (double& l : corral.lambda) l /= total;
            x = detail::combine(points, corral);
        }
        // The entering point was rejected immediately: no further descent is possible.
        if (std::find(corral.idx.begin(), corral.idx.end(), entering) == corral.idx.end() &&
            norm(x) >= xnorm)
            break;
        if (++iterations > cap)
            throw convergence_error("min_norm_point: iteration cap exceeded",
                                    detail::finish(points, corral, iterations));
    }
    return detail::finish(points, corral, iterations);
}

struct Containment {
    bool contained = false;
    double distance = 0.0;
    // Convex weights over the input points; their combination is the hull
    // point nearest theta (reproduces theta when epsilon = 0 and contained).
    std::optional<Vector> witness;
};

/// Is dist(theta, conv(points)) <= epsilon + tol?
inline Containment hull_contains(const PointSet& points, std::span<const double> theta,
                                 double epsilon = 0.0, double tol = default_tol,
                                 const WarmStart* warm = nullptr) {
    if (theta.size() != points.dim())
        throw invalid_input("hull_contains: theta dimension does not match points");
    require_finite(theta, "hull_contains: theta");
    if (!(epsilon >= 0.0)) throw invalid_input("hull_contains: epsilon must be nonnegative");
    const PointSet shifted = points.translated(theta);
    MinNormResult r = min_norm_point(shifted, tol, warm);
    Containment c;
    c.distance = r.distance;
    c.contained = r.distance <= epsilon + tol;
    if (c.contained) c.witness = std::move(r.coefficients);
    return c;
}

}  // namespace randhull::geom

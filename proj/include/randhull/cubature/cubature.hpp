#pragma once

// Randomized cubature: the doubling construction over batch means (Algorithm 1),
// the naive resampling schemes, recombination to dim+1 atoms, and an
// independent verification of the moment conditions.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "randhull/dist/exact.hpp"
#include "randhull/dist/sample.hpp"
#include "randhull/geom/caratheodory.hpp"
#include "randhull/geom/min_norm.hpp"

namespace randhull::cubature {

using random::RngStream;

enum class Status { success, budget_exhausted };

inline const char* to_string(Status s) { return s == Status::success ? "success" : "budget-exhausted"; }

struct CubatureResult {
    Status status = Status::budget_exhausted;
    // Final rule: at most dim+1 draws with convex weights (empty unless success).
    std::optional<WeightedMeasure> measure;
    // Algorithm 1 only: the rule over the batch means x_i, and its expansion
    // onto raw draws with weights 2^{-k} lambda_m replicated over the batches.
    std::optional<WeightedMeasure> x_measure;
    std::optional<WeightedMeasure> expanded;
    std::vector<std::size_t> expanded_draw_index;  // index j*ell*d + i_m of each expanded atom
    int k = 0;
    std::uint64_t samples_drawn = 0;
    std::uint64_t iterations = 0;  // naive schemes: rounds performed
    std::uint64_t hull_tests = 0;
    double residual = 0.0;        // max_k |target_k - mean_k| of `measure`
    double last_distance = 0.0;   // distance from target to the last hull tested
    Vector target;
    // Algorithm 1 audit trail: every raw draw in order, and the final batch means.
    PointSet draws;
    PointSet x_points;
};

namespace detail {

inline double max_residual(const WeightedMeasure& m, std::span<const double> target) {
    const Vector mu = m.mean();
    double r = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) r = std::max(r, std::abs(mu[k] - target[k]));
    return r;
}

// Rule supported on at most dim+1 of `points` reproducing `target`, from a
// containment witness: Caratheodory reduction, then an exact affine solve on
// the surviving atoms when it stays nonnegative.
inline geom::Reduction extract_rule(const PointSet& points, const Vector& witness, std::span<const double> target,
                                    double tol) {
    std::vector<std::size_t> idx;
    Vector w;
    double total = 0.0;
    for (std::size_t i = 0; i < witness.size(); ++i)
        if (witness[i] > 0.0) {
            idx.push_back(i);
            w.push_back(witness[i]);
            total += witness[i];
        }
    for (double& v : w) v /= total;
    const WeightedMeasure local(points.subset(idx), w, 1e-9);
    geom::Reduction red = geom::caratheodory_reduce_indices(local, std::max(tol, 1e-7));
    for (auto& i : red.indices) i = idx[i];
    if (auto polished = geom::barycentric_weights(points.subset(red.indices), target)) red.weights = *polished;
    return red;
}

inline Vector resolve_target(const dist::DistributionSpec& spec, std::optional<Vector> target) {
    Vector t = target ? std::move(*target) : dist::mean(spec);
    if (t.size() != spec.dim()) throw invalid_input("cubature: target dimension does not match spec");
    require_finite(t, "cubature: target");
    return t;
}

}  // namespace detail

/// Reduces a discrete measure to at most dim+1 atoms with the same mean.
inline WeightedMeasure recombine(const WeightedMeasure& measure, double tol = geom::default_tol) {
    if (measure.size() <= measure.dim() + 1) return measure;
    geom::Reduction red = geom::caratheodory_reduce_indices(measure, tol);
    PointSet support = measure.support().subset(red.indices);
    const Vector target = measure.mean();
    if (auto polished = geom::barycentric_weights(support, target)) red.weights = *polished;
    WeightedMeasure out(std::move(support), std::move(red.weights), 1e-9);
    if (detail::max_residual(out, target) > tol)
        throw geom::reduction_error("recombine: mean drift exceeds tolerance");
    return out;
}

struct Algorithm1Config {
    std::size_t ell = 17;
    int max_k = 40;
    double tol = geom::default_tol;
    std::uint64_t max_draws = std::uint64_t{1} << 24;
};

/// Algorithm 1: ell*d batch means x_i, doubled until the target lies in their
/// hull. After k doublings x_i averages the 2^k draws with indices j*ell*d + i,
/// j = 0..2^k-1, and samples_drawn = ell*d*2^k.
inline CubatureResult run_algorithm1(const dist::DistributionSpec& spec, std::optional<Vector> target_in,
                                     RngStream& stream, const Algorithm1Config& cfg = {}) {
    if (cfg.ell < 2) throw invalid_input("run_algorithm1: ell must be at least 2");
    if (cfg.max_k < 0) throw invalid_input("run_algorithm1: max_k must be nonnegative");
    const std::size_t d = spec.dim();
    const std::size_t m = cfg.ell * d;
    CubatureResult out;
    out.target = detail::resolve_target(spec, std::move(target_in));

    dist::PointStream draws(spec, stream);
    Vector y(d);
    Vector raw;
    raw.reserve(m * d);
    for (std::size_t i = 0; i < m; ++i) {
        draws.next(y);
        raw.insert(raw.end(), y.begin(), y.end());
    }
    PointSet x(d, raw);

    while (true) {
        const auto c = geom::hull_contains(x, out.target, 0.0, cfg.tol);
        ++out.hull_tests;
        out.last_distance = c.distance;
        if (c.contained) {
            out.samples_drawn = draws.drawn();
            out.draws = PointSet(d, raw);
            out.x_points = x;
            geom::Reduction red = detail::extract_rule(x, *c.witness, out.target, cfg.tol);
            out.x_measure = WeightedMeasure(x.subset(red.indices), red.weights, 1e-9);

            const std::size_t batches = std::size_t{1} << out.k;
            const double scale = std::ldexp(1.0, -out.k);
            Vector coords, weights;
            for (std::size_t j = 0; j < batches; ++j)
                for (std::size_t q = 0; q < red.indices.size(); ++q) {
                    const std::size_t id = j * m + red.indices[q];
                    out.expanded_draw_index.push_back(id);
                    auto p = out.draws[id];
                    coords.insert(coords.end(), p.begin(), p.end());
                    weights.push_back(scale * red.weights[q]);
                }
            out.expanded = WeightedMeasure(PointSet(d, std::move(coords)), std::move(weights), 1e-9);
            out.measure = recombine(*out.expanded, std::max(cfg.tol, 1e-8));
            out.residual = detail::max_residual(*out.measure, out.target);
            out.status = Status::success;
            return out;
        }
        if (out.k >= cfg.max_k || draws.drawn() * 2 > cfg.max_draws) {
            out.samples_drawn = draws.drawn();
            out.draws = PointSet(d, raw);
            out.x_points = x;
            out.status = Status::budget_exhausted;
            return out;
        }
        const std::size_t batches = std::size_t{1} << out.k;
        const double scale = std::ldexp(1.0, -out.k);
        Vector z(m * d, 0.0);
        for (std::size_t j = batches; j < 2 * batches; ++j)
            for (std::size_t i = 0; i < m; ++i) {
                draws.next(y);
                raw.insert(raw.end(), y.begin(), y.end());
                for (std::size_t k = 0; k < d; ++k) z[i * d + k] += scale * y[k];
            }
        for (std::size_t i = 0; i < m; ++i) {
            auto xi = x.mutable_point(i);
            for (std::size_t k = 0; k < d; ++k) xi[k] = (xi[k] + z[i * d + k]) / 2.0;
        }
        ++out.k;
    }
}

enum class NaiveMode { a, b };

struct NaiveConfig {
    std::uint64_t max_iter = 100000;
    double tol = geom::default_tol;
    std::size_t candidates_per_dim = 64;  // mode a, continuous specs: fresh candidates per round
};

/// Naive schemes. Mode b redraws 2d points until their hull holds the target.
/// Mode a draws d points A, then tests A plus one candidate at a time: fresh
/// draws (at most candidates_per_dim * d) for continuous specs, every support
/// atom outside A for empirical specs.
inline CubatureResult naive_scheme(const dist::DistributionSpec& spec, NaiveMode mode, std::optional<Vector> target_in,
                                   RngStream& stream, const NaiveConfig& cfg = {}) {
    if (cfg.max_iter == 0) throw invalid_input("naive_scheme: max_iter must be positive");
    const std::size_t d = spec.dim();
    CubatureResult out;
    out.target = detail::resolve_target(spec, std::move(target_in));
    dist::PointStream draws(spec, stream);
    const auto* emp = std::get_if<dist::Empirical>(&spec.kind);

    auto accept = [&](const PointSet& pts, const geom::Containment& c) {
        geom::Reduction red = detail::extract_rule(pts, *c.witness, out.target, cfg.tol);
        out.measure = WeightedMeasure(pts.subset(red.indices), red.weights, 1e-9);
        out.residual = detail::max_residual(*out.measure, out.target);
        out.status = Status::success;
        out.samples_drawn = draws.drawn();
    };

    for (out.iterations = 1; out.iterations <= cfg.max_iter; ++out.iterations) {
        if (mode == NaiveMode::b) {
            PointSet pts;
            for (std::size_t i = 0; i < 2 * d; ++i) pts.push_back(draws.next());
            const auto c = geom::hull_contains(pts, out.target, 0.0, cfg.tol);
            ++out.hull_tests;
            out.last_distance = c.distance;
            if (c.contained) {
                accept(pts, c);
                return out;
            }
            continue;
        }
        PointSet base;
        for (std::size_t i = 0; i < d; ++i) base.push_back(draws.next());
        std::vector<Vector> candidates;
        if (emp) {
            const auto& s = emp->measure.support();
            for (std::size_t a = 0; a < s.size(); ++a) {
                bool in_base = false;
                for (std::size_t b = 0; b < base.size() && !in_base; ++b)
                    in_base = std::equal(s[a].begin(), s[a].end(), base[b].begin());
                if (!in_base) candidates.emplace_back(s[a].begin(), s[a].end());
            }
        }
        const std::size_t budget = emp ? candidates.size() : cfg.candidates_per_dim * d;
        for (std::size_t q = 0; q < budget; ++q) {
            PointSet pts = base;
            pts.push_back(emp ? candidates[q] : draws.next());
            const auto c = geom::hull_contains(pts, out.target, 0.0, cfg.tol);
            ++out.hull_tests;
            out.last_distance = c.distance;
            if (c.contained) {
                accept(pts, c);
                return out;
            }
        }
    }
    out.iterations = cfg.max_iter;
    out.samples_drawn = draws.drawn();
    out.status = Status::budget_exhausted;
    return out;
}

enum class VerifyCode { ok, violation, degenerate_input };

inline const char* to_string(VerifyCode c) {
    switch (c) {
        case VerifyCode::ok: return "ok";
        case VerifyCode::violation: return "violation";
        case VerifyCode::degenerate_input: return "degenerate-input";
    }
    return "?";
}

struct VerifyReport {
    bool pass = false;
    VerifyCode code = VerifyCode::ok;
    Vector residuals;  // target - sum_j w_j x_j, per coordinate
    double max_residual = 0.0;
    double weight_sum = 0.0;
    std::vector<std::string> violations;
};

/// Re-checks a cubature rule from raw arrays: weights nonnegative and summing
/// to one within 1e-12, and the weighted mean matching `target` within tol.
inline VerifyReport verify_cubature(const PointSet& support, std::span<const double> weights,
                                    std::span<const double> target, double tol) {
    VerifyReport r;
    if (support.empty() || weights.empty()) {
        r.code = VerifyCode::degenerate_input;
        r.violations.push_back("degenerate-input: empty measure");
        return r;
    }
    if (weights.size() != support.size() || target.size() != support.dim()) {
        r.code = VerifyCode::degenerate_input;
        r.violations.push_back("degenerate-input: size mismatch between support, weights and target");
        return r;
    }
    const std::size_t d = support.dim();
    std::vector<CompensatedSum> acc(d);
    CompensatedSum total;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] >= 0.0))
            r.violations.push_back("negative-weight: index " + std::to_string(j));
        total.add(weights[j]);
        for (std::size_t k = 0; k < d; ++k) acc[k].add(weights[j] * support[j][k]);
    }
    r.weight_sum = total.value();
    if (std::abs(r.weight_sum - 1.0) > 1e-12) r.violations.push_back("weight-sum: weights do not sum to 1");
    r.residuals.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        r.residuals[k] = target[k] - acc[k].value();
        r.max_residual = std::max(r.max_residual, std::abs(r.residuals[k]));
        if (!(std::abs(r.residuals[k]) <= tol))
            r.violations.push_back("moment-residual: coordinate " + std::to_string(k));
    }
    r.code = r.violations.empty() ? VerifyCode::ok : VerifyCode::violation;
    r.pass = r.violations.empty();
    return r;
}

inline VerifyReport verify_cubature(const CubatureResult& result, std::span<const double> target, double tol) {
    if (!result.measure) return verify_cubature(PointSet{}, {}, target, tol);
    return verify_cubature(result.measure->support(), result.measure->weights(), target, tol);
}

inline nlohmann::json to_json(const WeightedMeasure& m) {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) pts.push_back(Vector(m.support()[i].begin(), m.support()[i].end()));
    return {{"points", pts}, {"weights", m.weights()}};
}

inline nlohmann::json to_json(const CubatureResult& r) {
    nlohmann::json j = {{"status", to_string(r.status)},
                        {"k", r.k},
                        {"samples_drawn", r.samples_drawn},
                        {"iterations", r.iterations},
                        {"residual", r.residual},
                        {"target", r.target}};
    if (r.measure) j["measure"] = to_json(*r.measure);
    if (r.x_measure) j["x_measure"] = to_json(*r.x_measure);
    if (r.expanded) {
        j["expanded"] = to_json(*r.expanded);
        j["expanded_draw_index"] = r.expanded_draw_index;
    }
    return j;
}

}  // namespace randhull::cubature

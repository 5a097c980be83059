#pragma once

// The depth level set K^alpha = {theta : alpha_X(theta) >= alpha}: membership,
// inclusion of (1-eps) K^alpha in random hulls, and the floating-body sandwich
// {alpha_X > alpha} in (K~^alpha)° in K^alpha.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "randhull/bounds/sample_count.hpp"
#include "randhull/dist/exact.hpp"
#include "randhull/dist/sample.hpp"
#include "randhull/estimators/depth.hpp"
#include "randhull/estimators/result.hpp"
#include "randhull/geom/epsilon_net.hpp"
#include "randhull/geom/min_norm.hpp"
#include "randhull/util/normal.hpp"
#include "randhull/util/parallel.hpp"

namespace randhull::interior {

using random::RngStream;

class unsupported_spec : public invalid_input {
public:
    using invalid_input::invalid_input;
};

enum class Verdict { yes, no, indeterminate };
enum class Source { exact, sampled };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "true";
        case Verdict::no: return "false";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}
inline const char* to_string(Source s) { return s == Source::exact ? "exact" : "sampled"; }

struct Membership {
    Verdict verdict = Verdict::indeterminate;
    Source source = Source::exact;
    double depth = 0.0;   // exact depth, or the re-measured sampled estimate
    double stderr = 0.0;  // zero for exact verdicts
};

struct SamplingConfig {
    std::size_t directions = 4096;
    std::size_t samples = 20000;
    unsigned threads = 1;
};

/// Radius -Phi^{-1}(alpha) of the standard Gaussian level set (negative when empty).
inline double gaussian_kalpha_radius(double alpha) { return -util::normal_quantile(alpha); }

namespace detail {

inline void check_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input(std::string(who) + ": alpha must lie in (0,1)");
}

// Membership of {alpha_X(theta) > alpha} (strict) or K^alpha (non-strict).
inline Membership depth_test(const dist::DistributionSpec& spec, std::span<const double> theta, double alpha,
                             bool strict, const RngStream& stream, const SamplingConfig& cfg) {
    Membership m;
    if (std::holds_alternative<dist::Gaussian>(spec.kind)) {
        // alpha_X(theta) = Phi(-|theta|); compare radii so boundary points are decided consistently.
        const double r = norm(theta), rk = gaussian_kalpha_radius(alpha);
        m.depth = util::normal_cdf(-r);
        m.verdict = (strict ? r < rk : r <= rk) ? Verdict::yes : Verdict::no;
        return m;
    }
    if (auto exact = dist::exact_tukey(spec, theta, 0.0)) {
        m.depth = *exact;
        m.verdict = (strict ? *exact > alpha : *exact >= alpha) ? Verdict::yes : Verdict::no;
        return m;
    }
    const auto est = estimators::estimate_tukey_mc(spec, theta, 0.0, cfg.directions, cfg.samples, stream, cfg.threads);
    m.source = Source::sampled;
    m.depth = est.estimate.value;
    m.stderr = est.estimate.stderr;
    if (m.depth + 4.0 * m.stderr < alpha)
        m.verdict = Verdict::no;
    else if (m.depth - 4.0 * m.stderr > alpha)
        m.verdict = Verdict::yes;
    return m;
}

}  // namespace detail

/// Is theta in K^alpha? Exact where the depth is known in closed form, else a
/// one-sided sampled test at 4 standard errors that may be indeterminate.
inline Membership kalpha_contains(const dist::DistributionSpec& spec, std::span<const double> theta, double alpha,
                                  const RngStream& stream, const SamplingConfig& cfg = {}) {
    detail::check_alpha(alpha, "kalpha_contains");
    if (theta.size() != spec.dim()) throw invalid_input("kalpha_contains: theta dimension does not match spec");
    return detail::depth_test(spec, theta, alpha, false, stream, cfg);
}

struct InclusionReport {
    double alpha = 0.0, eps = 0.0, delta = 0.0;
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double success_frequency = 0.0;
    double stderr = 0.0;  // binomial
    std::size_t net_size = 0;
    std::uint64_t theorem_n = 0;
    bool theorem_mode = true;  // n == theorem_n
    bool vacuous = false;      // K^alpha empty
};

struct InclusionConfig {
    std::optional<std::uint64_t> n;  // overrides the theorem's sample size
    std::optional<PointSet> net;     // explicit net instead of the greedy one
    std::size_t probes = 64;         // boundary directions for the greedy net
    unsigned threads = 1;
    double tol = geom::default_tol;
};

/// Frequency with which an eps-net of K^alpha (so conv(net) covers
/// (1-eps) K^alpha) lies inside the hull of n draws. Trial t draws from
/// stream.substream(t), exactly as the containment estimators do.
inline InclusionReport inclusion_experiment(const dist::DistributionSpec& spec, double alpha, double eps,
                                            double delta, std::uint64_t trials, const RngStream& stream,
                                            const InclusionConfig& cfg = {}) {
    detail::check_alpha(alpha, "inclusion_experiment");
    if (!(eps > 0.0 && eps < 1.0)) throw invalid_input("inclusion_experiment: eps must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw invalid_input("inclusion_experiment: delta must lie in (0,1)");
    if (trials == 0) throw invalid_input("inclusion_experiment: trials must be positive");
    if (!std::holds_alternative<dist::Gaussian>(spec.kind) && !cfg.net)
        throw unsupported_spec("inclusion_experiment: no gauge for the level set of spec '" + spec.name() + "'");
    const std::size_t d = spec.dim();

    InclusionReport rep;
    rep.alpha = alpha;
    rep.eps = eps;
    rep.delta = delta;
    rep.trials = trials;
    rep.theorem_n = bounds::interior_sample_size(d, alpha, delta, eps);
    rep.n = cfg.n.value_or(rep.theorem_n);
    rep.theorem_mode = rep.n == rep.theorem_n;

    PointSet net;
    if (cfg.net) {
        if (cfg.net->dim() != d) throw invalid_input("inclusion_experiment: net dimension does not match spec");
        net = *cfg.net;
    } else {
        const double radius = gaussian_kalpha_radius(alpha);
        if (radius < 0.0) {
            rep.vacuous = true;
            rep.success_frequency = 1.0;
            return rep;
        }
        if (radius == 0.0) {
            net = PointSet(d, Vector(d, 0.0));
        } else {
            RngStream probe_rng = stream.substream(std::numeric_limits<std::uint64_t>::max());
            auto gauge = [radius](std::span<const double> x) { return norm(x) / radius; };
            net = geom::epsilon_net(gauge, eps, d, probe_rng, cfg.probes).points;
        }
    }
    rep.net_size = net.size();

    std::vector<std::uint8_t> ok(trials, 0);
    util::parallel_for(trials, cfg.threads, [&](std::size_t t) {
        RngStream rng = stream.substream(t);
        const PointSet pts = dist::sample(spec, rep.n, rng);
        bool all = true;
        for (std::size_t a = 0; a < net.size() && all; ++a)
            all = geom::hull_contains(pts, net[a], 0.0, cfg.tol).contained;
        ok[t] = all;
    });
    std::uint64_t hits = 0;
    for (auto v : ok) hits += v;
    const auto est = estimators::proportion(hits, trials, stream.seed());
    rep.success_frequency = est.value;
    rep.stderr = est.stderr;
    return rep;
}

struct SandwichRow {
    Vector theta;
    Membership strict_inner;  // alpha_X(theta) > alpha
    Membership polar;         // theta in the polar of the floating body
    Membership kalpha;        // alpha_X(theta) >= alpha
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    std::size_t violations = 0;  // strict member outside the polar, or polar member outside K^alpha
    std::size_t abstentions = 0;  // rows with an indeterminate verdict in a compared pair
};

namespace detail {

// theta in (K~^alpha)° iff <u, theta> <= q_u for every unit u, where q_u is the
// upper-alpha quantile of <u, X>. Sampled: refuted when some direction exceeds
// a 4-sigma upper order statistic, confirmed when all stay below the lower one.
inline Membership polar_test(const dist::DistributionSpec& spec, std::span<const double> theta, double alpha,
                             const RngStream& stream, const SamplingConfig& cfg) {
    Membership m;
    if (std::holds_alternative<dist::Gaussian>(spec.kind)) {
        // K~^alpha is the ball of radius 1/Phi^{-1}(1-alpha); its polar has radius Phi^{-1}(1-alpha).
        const double rp = util::normal_quantile(1.0 - alpha);
        m.depth = util::normal_cdf(-norm(theta));
        m.verdict = norm(theta) <= rp ? Verdict::yes : Verdict::no;
        return m;
    }
    m.source = Source::sampled;
    const std::size_t d = spec.dim(), n = cfg.samples;
    RngStream srng = stream.substream(10), drng = stream.substream(11);
    const PointSet x = dist::sample(spec, n, srng);
    const double nd = static_cast<double>(n);
    const double spread = 4.0 * std::sqrt(nd * alpha * (1.0 - alpha));
    const auto k_lo = static_cast<std::size_t>(std::clamp(std::floor(nd * (1.0 - alpha) - spread), 0.0, nd - 1.0));
    const auto k_hi = static_cast<std::size_t>(std::clamp(std::ceil(nd * (1.0 - alpha) + spread), 0.0, nd - 1.0));
    bool all_below = true;
    std::vector<double> proj(n);
    for (std::size_t j = 0; j < cfg.directions; ++j) {
        const Vector u = dist::sample_direction(drng, d);
        for (std::size_t i = 0; i < n; ++i) proj[i] = dot(u, x[i]);
        std::nth_element(proj.begin(), proj.begin() + static_cast<std::ptrdiff_t>(k_hi), proj.end());
        const double q_hi = proj[k_hi];
        std::nth_element(proj.begin(), proj.begin() + static_cast<std::ptrdiff_t>(k_lo), proj.end());
        const double q_lo = proj[k_lo];
        const double t = dot(u, theta);
        if (t > q_hi) {
            m.verdict = Verdict::no;
            return m;
        }
        if (!(t < q_lo)) all_below = false;
    }
    m.verdict = all_below ? Verdict::yes : Verdict::indeterminate;
    return m;
}

}  // namespace detail

/// Checks the sandwich on each theta of the grid. Gaussian specs use the
/// closed-form balls; other specs use sampled verdicts, and indeterminate
/// verdicts are abstentions rather than violations.
inline SandwichReport floating_sandwich_check(const dist::DistributionSpec& spec, double alpha,
                                              const std::vector<Vector>& theta_grid, const RngStream& stream,
                                              const SamplingConfig& cfg = {}) {
    detail::check_alpha(alpha, "floating_sandwich_check");
    SandwichReport rep;
    for (std::size_t g = 0; g < theta_grid.size(); ++g) {
        const Vector& th = theta_grid[g];
        if (th.size() != spec.dim()) throw invalid_input("floating_sandwich_check: theta dimension does not match spec");
        const RngStream s = stream.substream(g);
        SandwichRow row{th, detail::depth_test(spec, th, alpha, true, s.substream(0), cfg),
                        detail::polar_test(spec, th, alpha, s.substream(1), cfg),
                        detail::depth_test(spec, th, alpha, false, s.substream(2), cfg)};
        bool abstain = false;
        if (row.strict_inner.verdict == Verdict::yes) {
            if (row.polar.verdict == Verdict::no) ++rep.violations;
            if (row.polar.verdict == Verdict::indeterminate) abstain = true;
        }
        if (row.polar.verdict == Verdict::yes) {
            if (row.kalpha.verdict == Verdict::no) ++rep.violations;
            if (row.kalpha.verdict == Verdict::indeterminate) abstain = true;
        }
        if (row.strict_inner.verdict == Verdict::indeterminate || row.polar.verdict == Verdict::indeterminate)
            abstain = true;
        rep.abstentions += abstain;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace randhull::interior

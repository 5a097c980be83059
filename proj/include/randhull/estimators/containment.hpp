#pragma once

// Monte Carlo estimation of the containment probability p^eps_n(theta), the
// first-hit index, and certified brackets for N_X.

#include <map>
#include <vector>

#include "randhull/dist/sample.hpp"
#include "randhull/estimators/result.hpp"
#include "randhull/geom/min_norm.hpp"
#include "randhull/util/normal.hpp"
#include "randhull/util/parallel.hpp"

namespace randhull::estimators {

using random::RngStream;

struct McConfig {
    unsigned threads = 1;
    double tol = geom::default_tol;
    double coordinate_budget = 1e10;  // cap on trials * points * dim
};

struct ProfileResult {
    std::vector<std::uint64_t> n_values;
    std::vector<EstimateResult> estimates;
    bool per_trial_monotone = true;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    // first_hit[j] counts trials whose first contained prefix is n_values[j];
    // the final entry counts trials never contained.
    std::vector<std::uint64_t> first_hit;
    // Per trial: index into n_values of the first contained prefix (n_values.size() if none).
    std::vector<std::uint32_t> first_hit_index;

    bool contained(std::size_t trial, std::size_t j) const { return first_hit_index[trial] <= j; }

    /// Estimate of E[sum_j c_j 1{contained at n_values[j]}] over the same
    /// trials, so differences of coupled estimates get an honest stderr.
    EstimateResult combination(std::span<const double> coeffs) const {
        if (coeffs.size() != n_values.size()) throw invalid_input("combination: one coefficient per n required");
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t pos = 0; pos < first_hit.size(); ++pos) {
            double v = 0.0;
            for (std::size_t j = pos; j < coeffs.size(); ++j) v += coeffs[j];
            const double c = static_cast<double>(first_hit[pos]);
            sum += c * v;
            sum_sq += c * v * v;
        }
        return make_estimate(sum, sum_sq, trials, seed, -std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity());
    }
};

namespace detail {

inline void check_theta(const dist::DistributionSpec& spec, std::span<const double> theta, const char* who) {
    if (theta.size() != spec.dim()) throw invalid_input(std::string(who) + ": theta dimension does not match spec");
    require_finite(theta, who);
}

inline void shift_into(std::span<double> p, std::span<const double> theta) {
    for (std::size_t k = 0; k < p.size(); ++k) p[k] -= theta[k];
}

}  // namespace detail

/// p^eps_n(theta) for every n in `n_values` from coupled prefixes: trial t
/// draws max(n_values) points from stream.substream(t) and tests each prefix.
inline ProfileResult estimate_p_profile(const dist::DistributionSpec& spec, std::span<const double> theta,
                                        double epsilon, std::vector<std::uint64_t> n_values,
                                        std::uint64_t trials, const RngStream& stream, const McConfig& cfg = {}) {
    detail::check_theta(spec, theta, "estimate_p_profile");
    if (n_values.empty() || n_values.front() == 0) throw invalid_input("estimate_p_profile: n values must be positive");
    for (std::size_t j = 1; j < n_values.size(); ++j)
        if (n_values[j] <= n_values[j - 1]) throw invalid_input("estimate_p_profile: n values must increase");
    if (trials < 100) throw invalid_input("estimate_p_profile: at least 100 trials required");
    if (!(epsilon >= 0.0)) throw invalid_input("estimate_p_profile: epsilon must be nonnegative");
    const std::size_t d = spec.dim(), k = n_values.size();
    const std::uint64_t n_max = n_values.back();
    if (static_cast<double>(trials) * static_cast<double>(n_max) * static_cast<double>(d) > cfg.coordinate_budget)
        throw budget_error("estimate_p_profile: trials * n * dim exceeds the coordinate budget");

    std::vector<std::uint32_t> pos(trials);
    std::vector<std::uint8_t> monotone(trials, 1);
    util::parallel_for(trials, cfg.threads, [&](std::size_t t) {
        RngStream rng = stream.substream(t);
        PointSet pts = dist::sample(spec, n_max, rng);
        for (std::size_t i = 0; i < pts.size(); ++i) detail::shift_into(pts.mutable_point(i), theta);
        geom::WarmStart warm;
        std::uint32_t first = static_cast<std::uint32_t>(k);
        for (std::size_t j = 0; j < k; ++j) {
            const auto r = geom::min_norm_point(pts.prefix(n_values[j]), cfg.tol, j ? &warm : nullptr);
            const bool in = r.distance <= epsilon + cfg.tol;
            if (in && first == k) first = static_cast<std::uint32_t>(j);
            if (!in && first < k) monotone[t] = 0;
            warm = geom::WarmStart::from(r);
        }
        pos[t] = first;
    });

    ProfileResult out;
    out.n_values = std::move(n_values);
    out.trials = trials;
    out.seed = stream.seed();
    out.first_hit.assign(k + 1, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        ++out.first_hit[pos[t]];
        out.per_trial_monotone = out.per_trial_monotone && monotone[t];
    }
    out.first_hit_index = std::move(pos);
    std::uint64_t hits = 0;
    for (std::size_t j = 0; j < k; ++j) {
        hits += out.first_hit[j];
        out.estimates.push_back(proportion(hits, trials, out.seed));
    }
    return out;
}

/// Estimate of p_a - p_b from two profiles run on the same stream and trial
/// count (so trial t of each shares its randomness): a.n_values[ja] against
/// b.n_values[jb].
inline EstimateResult coupled_difference(const ProfileResult& a, std::size_t ja, const ProfileResult& b,
                                         std::size_t jb) {
    if (a.trials != b.trials || a.seed != b.seed) throw invalid_input("coupled_difference: profiles are not coupled");
    if (ja >= a.n_values.size() || jb >= b.n_values.size()) throw invalid_input("coupled_difference: index out of range");
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t t = 0; t < a.trials; ++t) {
        const double v = static_cast<double>(a.contained(t, ja)) - static_cast<double>(b.contained(t, jb));
        sum += v;
        sum_sq += v * v;
    }
    return make_estimate(sum, sum_sq, a.trials, a.seed, -1.0, 1.0);
}

struct FirstHitResult {
    EstimateResult mean_hit;  // estimate of E[N~]; a lower bound when capped > 0
    std::uint64_t capped = 0;
    bool reliable = true;  // false when more than half the trials hit the cap
    NxBracket bracket;     // from E[N~]/2 <= N_X <= 2 E[N~]
};

/// First index at which the growing sample hull comes within epsilon of theta.
inline FirstHitResult estimate_first_hit(const dist::DistributionSpec& spec, std::span<const double> theta,
                                         std::uint64_t trials, std::uint64_t cap, const RngStream& stream,
                                         const McConfig& cfg = {}, double epsilon = 0.0, double confidence = 0.95) {
    detail::check_theta(spec, theta, "estimate_first_hit");
    if (trials < 100) throw invalid_input("estimate_first_hit: at least 100 trials required");
    if (cap == 0) throw invalid_input("estimate_first_hit: cap must be positive");
    if (!(confidence > 0.0 && confidence < 1.0)) throw invalid_input("estimate_first_hit: confidence must lie in (0,1)");
    const std::size_t d = spec.dim();
    if (static_cast<double>(trials) * static_cast<double>(cap) * static_cast<double>(d) > cfg.coordinate_budget)
        throw budget_error("estimate_first_hit: trials * cap * dim exceeds the coordinate budget");

    std::vector<std::uint64_t> hit(trials);
    util::parallel_for(trials, cfg.threads, [&](std::size_t t) {
        RngStream rng = stream.substream(t);
        dist::PointStream draws(spec, rng);
        Vector p(d);
        draws.next(p);
        detail::shift_into(p, theta);
        PointSet pts(d, p);
        geom::MinNormResult r = geom::min_norm_point(pts, cfg.tol);
        std::uint64_t n = 1;
        while (r.distance > epsilon + cfg.tol && n < cap) {
            draws.next(p);
            detail::shift_into(p, theta);
            pts.push_back(p);
            ++n;
            // The nearest point only moves if the new point violates its optimality condition.
            if (dot(p, r.point) < r.distance * r.distance) {
                const geom::WarmStart warm = geom::WarmStart::from(r);
                r = geom::min_norm_point(pts, cfg.tol, &warm);
            } else {
                r.coefficients.push_back(0.0);
            }
        }
        hit[t] = r.distance <= epsilon + cfg.tol ? n : 0;  // 0 marks a capped trial
    });

    FirstHitResult out;
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t h : hit) {
        const double v = static_cast<double>(h == 0 ? cap : h);
        if (h == 0) ++out.capped;
        sum += v;
        sum_sq += v * v;
    }
    out.mean_hit = make_estimate(sum, sum_sq, trials, stream.seed(), 1.0, std::numeric_limits<double>::infinity());
    out.reliable = 2 * out.capped <= trials;
    const double z = util::normal_quantile(0.5 + confidence / 2.0);
    const double lo = 0.5 * (out.mean_hit.value - z * out.mean_hit.stderr);
    out.bracket.lower = static_cast<std::uint64_t>(std::max(1.0, ceil_tol(lo)));
    out.bracket.upper = out.capped > 0 ? unbounded
                                       : static_cast<std::uint64_t>(std::floor(2.0 * (out.mean_hit.value + z * out.mean_hit.stderr)));
    out.bracket.upper = std::max(out.bracket.upper, out.bracket.lower);
    out.bracket.confidence = confidence;
    out.bracket.widened = out.capped > 0;
    return out;
}

enum class Verdict { above, below, indeterminate };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::above: return "above";
        case Verdict::below: return "below";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

struct Comparison {
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double radius = 0.0;  // Hoeffding half-width at the final look
    Verdict verdict = Verdict::indeterminate;
};

struct NxSearch {
    NxBracket bracket;
    std::vector<Comparison> comparisons;  // in the order performed
};

struct NSearchConfig {
    std::uint64_t first_look = 256;
    std::uint64_t max_trials = std::uint64_t{1} << 17;
    std::uint64_t max_n = std::uint64_t{1} << 16;
};

/// Certified bracket for N_X(theta) = min{n : p^eps_n(theta) >= 1/2}.
///
/// Doubling search, then two bisections: the smallest n certified with
/// p_n > 1/2 is the upper end, one past the largest n certified with p_n < 1/2
/// the lower end. Each comparison is a sequential two-sided Hoeffding test at
/// looks first_look * 2^j; comparison i gets error budget (1-confidence) 2^{-i},
/// split evenly over its looks, so the bracket holds at `confidence`.
inline NxSearch estimate_N(const dist::DistributionSpec& spec, std::span<const double> theta, double confidence,
                           const RngStream& stream, const McConfig& cfg = {}, double epsilon = 0.0,
                           const NSearchConfig& search = {}) {
    detail::check_theta(spec, theta, "estimate_N");
    if (!(confidence > 0.5 && confidence < 1.0)) throw invalid_input("estimate_N: confidence must lie in (0.5, 1)");
    if (search.first_look == 0 || search.max_trials < search.first_look)
        throw invalid_input("estimate_N: invalid look schedule");
    const std::size_t d = spec.dim();

    std::vector<std::uint64_t> looks;
    for (std::uint64_t t = search.first_look; t < search.max_trials; t *= 2) looks.push_back(t);
    looks.push_back(search.max_trials);

    NxSearch out;
    std::map<std::uint64_t, Verdict> cache;
    auto test = [&](std::uint64_t n) -> Verdict {
        if (auto it = cache.find(n); it != cache.end()) return it->second;
        if (static_cast<double>(search.max_trials) * static_cast<double>(n) * static_cast<double>(d) >
            cfg.coordinate_budget)
            throw budget_error("estimate_N: comparison at n exceeds the coordinate budget");
        const double delta = std::ldexp(1.0 - confidence, -static_cast<int>(out.comparisons.size() + 1)) /
                             static_cast<double>(looks.size());
        const RngStream base = stream.substream(n);
        std::vector<std::uint8_t> in(search.max_trials, 0);
        std::uint64_t done = 0, hits = 0;
        Comparison c;
        c.n = n;
        for (std::uint64_t look : looks) {
            util::parallel_for(look - done, cfg.threads, [&](std::size_t i) {
                RngStream rng = base.substream(done + i);
                PointSet pts = dist::sample(spec, n, rng);
                for (std::size_t q = 0; q < pts.size(); ++q) detail::shift_into(pts.mutable_point(q), theta);
                in[done + i] = geom::min_norm_point(pts, cfg.tol).distance <= epsilon + cfg.tol;
            });
            for (std::uint64_t i = done; i < look; ++i) hits += in[i];
            done = look;
            c.trials = done;
            c.p_hat = static_cast<double>(hits) / static_cast<double>(done);
            c.radius = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(done)));
            if (c.p_hat - c.radius > 0.5) {
                c.verdict = Verdict::above;
                break;
            }
            if (c.p_hat + c.radius < 0.5) {
                c.verdict = Verdict::below;
                break;
            }
        }
        out.comparisons.push_back(c);
        cache[n] = c.verdict;
        return c.verdict;
    };

    std::uint64_t below = 0, hi = 0;
    for (std::uint64_t n = 1; n <= search.max_n; n *= 2) {
        const Verdict v = test(n);
        if (v == Verdict::above) {
            hi = n;
            break;
        }
        if (v == Verdict::below) below = n;
    }
    out.bracket.confidence = confidence;
    if (hi == 0) {
        out.bracket.lower = below + 1;
        out.bracket.upper = unbounded;
        out.bracket.widened = true;
        return out;
    }
    std::uint64_t lo = hi / 2;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (test(mid) == Verdict::above)
            hi = mid;
        else
            lo = mid;
    }
    std::uint64_t top = hi;
    lo = below;
    while (top - lo > 1) {
        const std::uint64_t mid = lo + (top - lo) / 2;
        if (test(mid) == Verdict::below)
            lo = mid;
        else
            top = mid;
    }
    out.bracket.lower = lo + 1;
    out.bracket.upper = hi;
    for (const auto& c : out.comparisons)
        if (c.verdict == Verdict::indeterminate) out.bracket.widened = true;
    return out;
}

}  // namespace randhull::estimators

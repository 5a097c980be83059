#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <vector>

#include "randhull/core.hpp"
#include "randhull/random/rng.hpp"

namespace randhull::geom {

class invalid_oracle : public invalid_input {
public:
    using invalid_input::invalid_input;
};

template <class G>
concept Gauge = requires(const G& g, std::span<const double> x) {
    { g(x) } -> std::convertible_to<double>;
};

struct EpsilonNet {
    PointSet points;
    std::size_t probes = 0;
    double cover_radius = 0.0;  // max over probes of gauge distance to the net
    double cardinality_bound = 0.0;
};

/// Greedy epsilon-net of the boundary of a symmetric convex body K, given by
/// its Minkowski functional `gauge` and a list of boundary probes.
///
/// Farthest-point insertion: start from the first probe, repeatedly add the
/// probe farthest (in gauge distance) from the current net until every probe is
/// within epsilon. Net points are epsilon-separated, so |A| <= (1+2/eps)^dim.
template <Gauge G>
EpsilonNet epsilon_net(const G& gauge, double epsilon, const PointSet& boundary_probes) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw invalid_input("epsilon_net: epsilon must lie in (0,1)");
    const std::size_t m = boundary_probes.size();
    const std::size_t d = boundary_probes.dim();

    auto gauge_checked = [&](std::span<const double> x) {
        const double g = gauge(x);
        if (!std::isfinite(g) || g < 0.0) throw invalid_oracle("epsilon_net: gauge returned invalid value");
        return g;
    };

    std::vector<double> dist(m, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> chosen;
    Vector diff(d);
    std::size_t next = 0;
    while (true) {
        chosen.push_back(next);
        auto c = boundary_probes[next];
        double worst = -1.0;
        std::size_t worst_i = 0;
        for (std::size_t i = 0; i < m; ++i) {
            auto p = boundary_probes[i];
            for (std::size_t k = 0; k < d; ++k) diff[k] = p[k] - c[k];
            dist[i] = std::min(dist[i], gauge_checked(diff));
            if (dist[i] > worst) {
                worst = dist[i];
                worst_i = i;
            }
        }
        if (worst <= epsilon) break;
        next = worst_i;
    }

    EpsilonNet net;
    net.points = boundary_probes.subset(chosen);
    net.probes = m;
    net.cover_radius = 0.0;
    for (double v : dist) net.cover_radius = std::max(net.cover_radius, v);
    net.cardinality_bound = std::pow(1.0 + 2.0 / epsilon, static_cast<double>(d));
    for (std::size_t i = 0; i < net.points.size(); ++i)
        if (gauge_checked(net.points[i]) > 1.0 + 1e-9)
            throw invalid_oracle("epsilon_net: probe lies outside the body");
    return net;
}

/// Boundary probes obtained by scaling directions onto the gauge unit sphere.
template <Gauge G>
PointSet project_to_boundary(const G& gauge, const PointSet& directions) {
    PointSet out = directions;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto p = out.mutable_point(i);
        const double g = gauge(std::span<const double>(p.data(), p.size()));
        if (!std::isfinite(g) || g <= 0.0)
            throw invalid_oracle("project_to_boundary: gauge returned invalid value");
        for (double& c : p) c /= g;
    }
    return out;
}

/// Net built from `probes` uniformly random directions projected onto the
/// boundary of K (default 4096 per dimension).
template <Gauge G>
EpsilonNet epsilon_net(const G& gauge, double epsilon, std::size_t dim, random::RngStream& rng,
                       std::size_t probes = 0) {
    if (dim == 0) throw invalid_input("epsilon_net: dim must be positive");
    if (probes == 0) probes = 4096 * dim;
    Vector coords(probes * dim);
    for (std::size_t i = 0; i < probes; ++i) {
        double r2 = 0.0;
        do {
            r2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                coords[i * dim + k] = rng.normal();
                r2 += coords[i * dim + k] * coords[i * dim + k];
            }
        } while (r2 == 0.0);
    }
    return epsilon_net(gauge, epsilon, project_to_boundary(gauge, PointSet(dim, std::move(coords))));
}

}  // namespace randhull::geom

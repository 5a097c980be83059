#include <gtest/gtest.h>

#include <numbers>

#include "randhull/dist/exact.hpp"
#include "randhull/estimators/containment.hpp"
#include "randhull/estimators/depth.hpp"

using namespace randhull;
using random::RngStream;
using namespace randhull::estimators;

namespace {

double closed_halfplane_mass(const WeightedMeasure& m, std::span<const double> theta, double angle) {
    const double c0 = std::cos(angle), c1 = std::sin(angle);
    double mass = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double s = c0 * (m.support()[i][0] - theta[0]) + c1 * (m.support()[i][1] - theta[1]);
        if (s >= -1e-12) mass += m.weights()[i];
    }
    return mass;
}

// Exhaustive oracle: the minimum is attained just off a direction orthogonal to
// some x_i - theta (or the pair direction x_i - x_j through theta), so test every
// such candidate rotated by a tiny amount either way.
double brute_tukey_2d(const WeightedMeasure& m, std::span<const double> theta) {
    std::vector<double> angles{0.0};
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::atan2(m.support()[i][1] - theta[1], m.support()[i][0] - theta[0]);
        for (double base : {a + std::numbers::pi / 2, a - std::numbers::pi / 2}) angles.push_back(base);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double b = std::atan2(m.support()[j][1] - m.support()[i][1], m.support()[j][0] - m.support()[i][0]);
            angles.push_back(b + std::numbers::pi / 2);
            angles.push_back(b - std::numbers::pi / 2);
        }
    }
    double best = 1.0;
    for (double a : angles)
        for (double delta : {-1e-7, 0.0, 1e-7}) best = std::min(best, closed_halfplane_mass(m, theta, a + delta));
    return best;
}

}  // namespace

TEST(EmpiricalTukey2d, Examples) {
    const auto cross = WeightedMeasure::uniform(PointSet::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
    EXPECT_DOUBLE_EQ(empirical_tukey_2d(cross, Vector{0.0, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(empirical_tukey_2d(cross, Vector{3.0, 0.0}), 0.0);
    const auto tri = WeightedMeasure::uniform(PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}}));
    EXPECT_NEAR(empirical_tukey_2d(tri, Vector{1.0 / 3.0, 1.0 / 3.0}), 1.0 / 3.0, 1e-15);
    // an atom at theta always counts
    const auto with_center = WeightedMeasure::uniform(PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}, {-1, -1}}));
    EXPECT_NEAR(empirical_tukey_2d(with_center, Vector{0.0, 0.0}), 0.5, 1e-15);
}

TEST(EmpiricalTukey2d, MatchesPairDirectionEnumeration) {
    RngStream r(1, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vector> rows;
        Vector w;
        double total = 0.0;
        for (int i = 0; i < 12; ++i) {
            // integer grid points force collinear and repeated configurations
            if (trial % 2)
                rows.push_back({std::floor(5 * r.uniform()) - 2.0, std::floor(5 * r.uniform()) - 2.0});
            else
                rows.push_back({r.normal(), r.normal()});
            w.push_back(r.uniform() + 0.1);
            total += w.back();
        }
        for (double& x : w) x /= total;
        const WeightedMeasure m(PointSet::from_rows(rows), w, 1e-9);
        const Vector theta = trial % 3 ? Vector{0.0, 0.0} : Vector{0.3 * r.normal(), 0.3 * r.normal()};
        ASSERT_NEAR(empirical_tukey_2d(m, theta), brute_tukey_2d(m, theta), 1e-12) << "trial " << trial;
    }
}

TEST(EmpiricalTukey2d, RejectsNonPlanar) {
    const auto m = WeightedMeasure::uniform(PointSet::from_rows({{0, 0, 0}}));
    EXPECT_THROW(empirical_tukey_2d(m, Vector{0, 0, 0}), invalid_input);
}

TEST(TukeyMc, GaussianHalfAndNeverBelowExact) {
    for (const Vector& theta : {Vector{0.0, 0.0}, Vector{0.5, 0.0}, Vector{-1.0, 1.0}}) {
        const auto r = estimate_tukey_mc(dist::gaussian(2), theta, 0.0, 512, 20000, RngStream(2, 0));
        const double exact = *dist::exact_tukey(dist::gaussian(2), theta);
        EXPECT_GE(r.estimate.value, exact - 4.0 * r.estimate.stderr);
        EXPECT_LE(r.estimate.value, exact + 0.02);
        EXPECT_LE(r.scan_min, r.estimate.value + 4.0 * r.estimate.stderr);
    }
}

TEST(TukeyMc, TwoPointDepthIsEpsilon) {
    const auto r = estimate_tukey_mc(dist::two_point(0.2), Vector{0.0}, 0.0, 16, 20000, RngStream(3, 0));
    EXPECT_NEAR(r.estimate.value, 0.2, 4.0 * r.estimate.stderr);
}

TEST(TukeyMc, OutsideEmpiricalHullGivesZero) {
    const auto m = WeightedMeasure::uniform(PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}}));
    const Vector theta{2.0, 2.0};
    EXPECT_EQ(empirical_tukey_2d(m, theta), 0.0);
    const auto r = estimate_tukey_mc(dist::empirical(m), theta, 0.0, 2048, 1000, RngStream(4, 0));
    EXPECT_EQ(r.estimate.value, 0.0);
}

TEST(TukeyMc, ThreadInvariant) {
    const auto a = estimate_tukey_mc(dist::gaussian(3), Vector{0.2, 0.0, 0.0}, 0.1, 300, 2000, RngStream(5, 0), 1);
    const auto b = estimate_tukey_mc(dist::gaussian(3), Vector{0.2, 0.0, 0.0}, 0.1, 300, 2000, RngStream(5, 0), 4);
    EXPECT_EQ(a.estimate.value, b.estimate.value);
    EXPECT_EQ(a.direction, b.direction);
}

TEST(Brackets, FirstHitBracketContainsNSearchMidpoint) {
    struct Case {
        dist::DistributionSpec spec;
        Vector theta;
    };
    std::vector<Case> cases{{dist::gaussian(1), {0.0}}, {dist::gaussian(2), {0.0, 0.0}},
                            {dist::gaussian(3), {0.0, 0.0, 0.0}}, {dist::two_point(0.25), {0.0}}};
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        const auto fh = estimate_first_hit(c.spec, c.theta, 5000, 10000, RngStream(6, i));
        const auto ns = estimate_N(c.spec, c.theta, 0.95, RngStream(7, i));
        const auto mid = (ns.bracket.lower + ns.bracket.upper) / 2;
        EXPECT_TRUE(fh.bracket.contains(mid)) << c.spec.name();
    }
}

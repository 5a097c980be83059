#include <gtest/gtest.h>

#include "randhull/bounds/containment.hpp"
#include "randhull/cubature/cubature.hpp"

using namespace randhull;
using random::RngStream;
using namespace randhull::cubature;

namespace {

Vector weighted_mean(const WeightedMeasure& m) {
    Vector mu(m.dim(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t k = 0; k < m.dim(); ++k) mu[k] += m.weights()[i] * m.support()[i][k];
    return mu;
}

void expect_valid_rule(const CubatureResult& r, std::size_t d) {
    ASSERT_EQ(r.status, Status::success);
    ASSERT_TRUE(r.measure.has_value());
    EXPECT_LE(r.measure->size(), d + 1);
    const auto v = verify_cubature(r, r.target, 1e-8);
    EXPECT_TRUE(v.pass);
    EXPECT_NEAR(v.weight_sum, 1.0, 1e-12);
    for (double w : r.measure->weights()) EXPECT_GE(w, 0.0);
}

}  // namespace

TEST(Algorithm1, PointMassTerminatesImmediately) {
    RngStream s(0, 0);
    const Vector at{0.5, -1.0};
    const auto r = run_algorithm1(dist::point_mass(at), at, s);
    expect_valid_rule(r, 2);
    EXPECT_EQ(r.k, 0);
    EXPECT_EQ(r.measure->size(), 1u);
    EXPECT_EQ(r.residual, 0.0);
}

TEST(Algorithm1, GaussianTwoD) {
    RngStream s(1, 0);
    Algorithm1Config cfg;
    cfg.ell = 17;
    const auto r = run_algorithm1(dist::gaussian(2), std::nullopt, s, cfg);
    expect_valid_rule(r, 2);
    EXPECT_LE(r.residual, 1e-9);
    EXPECT_LE(r.x_measure->size(), 3u);
    // expanded measure mean by direct summation
    const Vector mu = weighted_mean(*r.expanded);
    EXPECT_NEAR(mu[0], 0.0, 1e-9);
    EXPECT_NEAR(mu[1], 0.0, 1e-9);
}

TEST(Algorithm1, SampleAccountingAndShadowAverages) {
    // small ell and a skewed law force several doublings
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 40 && checked < 5; ++seed) {
        RngStream s(seed, 2);
        Algorithm1Config cfg;
        cfg.ell = 2;
        const auto r = run_algorithm1(dist::two_point(0.05), std::nullopt, s, cfg);
        ASSERT_EQ(r.status, Status::success);
        const std::size_t m = 2;
        EXPECT_EQ(r.samples_drawn, m << r.k);
        EXPECT_EQ(r.draws.size(), r.samples_drawn);
        if (r.k < 2) continue;
        ++checked;
        const std::size_t batches = std::size_t{1} << r.k;
        for (std::size_t i = 0; i < m; ++i) {
            double avg = 0.0;
            for (std::size_t j = 0; j < batches; ++j) avg += r.draws[j * m + i][0];
            avg /= static_cast<double>(batches);
            EXPECT_NEAR(r.x_points[i][0], avg, 1e-12 * (1.0 + std::abs(avg)));
        }
        // expansion telescopes: same mean as the rule over the x_i, within 1e-10
        const Vector a = weighted_mean(*r.expanded), b = weighted_mean(*r.x_measure);
        EXPECT_NEAR(a[0], b[0], 1e-10);
        for (std::size_t q = 0; q < r.expanded_draw_index.size(); ++q)
            EXPECT_EQ(r.expanded->support()[q][0], r.draws[r.expanded_draw_index[q]][0]);
        expect_valid_rule(r, 1);
    }
    EXPECT_GE(checked, 1);
}

TEST(Algorithm1, TrigThreeD) {
    RngStream s(3, 0);
    Algorithm1Config cfg;
    cfg.ell = 6;
    const auto r = run_algorithm1(dist::trig(3), std::nullopt, s, cfg);
    expect_valid_rule(r, 3);
    EXPECT_EQ(r.samples_drawn, 18u << r.k);
}

TEST(Algorithm1, BudgetExhaustedWhenTargetIsOutside) {
    RngStream s(4, 0);
    Algorithm1Config cfg;
    cfg.max_k = 3;
    const auto r = run_algorithm1(dist::gaussian(2), Vector{50.0, 50.0}, s, cfg);
    EXPECT_EQ(r.status, Status::budget_exhausted);
    EXPECT_FALSE(r.measure.has_value());
    EXPECT_EQ(r.k, 3);
    EXPECT_GT(r.last_distance, 40.0);
    EXPECT_EQ(std::string(to_string(r.status)), "budget-exhausted");
}

TEST(Algorithm1, RejectsSmallEll) {
    RngStream s(0, 0);
    Algorithm1Config cfg;
    cfg.ell = 1;
    EXPECT_THROW(run_algorithm1(dist::gaussian(2), std::nullopt, s, cfg), invalid_input);
}

TEST(Recombine, GaussianSampleToThreePoints) {
    RngStream s(5, 0);
    const auto m = WeightedMeasure::uniform(dist::sample(dist::gaussian(2), 100, s));
    const auto r = recombine(m);
    EXPECT_EQ(r.size(), 3u);
    const Vector a = m.mean(), b = r.mean();
    EXPECT_NEAR(a[0], b[0], 1e-9);
    EXPECT_NEAR(a[1], b[1], 1e-9);
}

TEST(Recombine, SmallMeasureUnchanged) {
    const auto m = WeightedMeasure(PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}}), {0.2, 0.3, 0.5});
    const auto r = recombine(m);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.weights(), m.weights());
}

TEST(Recombine, SymmetricLineMeasure) {
    const auto m = WeightedMeasure::uniform(PointSet::from_rows({{-2}, {-1}, {1}, {2}}));
    const auto r = recombine(m);
    EXPECT_LE(r.size(), 2u);
    EXPECT_NEAR(r.mean()[0], 0.0, 1e-12);
}

TEST(Recombine, NeverIncreasesSupport) {
    RngStream s(6, 0);
    for (std::size_t n = 1; n <= 30; ++n) {
        const auto m = WeightedMeasure::uniform(dist::sample(dist::gaussian(3), n, s));
        const auto r = recombine(m);
        EXPECT_LE(r.size(), std::min<std::size_t>(n, 4));
        const Vector a = m.mean(), b = r.mean();
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
    }
}

TEST(NaiveScheme, GaussianModeBGeometricHalf) {
    const RngStream base(7, 0);
    const std::size_t runs = 1000;
    double sum = 0.0;
    for (std::size_t i = 0; i < runs; ++i) {
        RngStream s = base.substream(i);
        const auto r = naive_scheme(dist::gaussian(2), NaiveMode::b, std::nullopt, s);
        ASSERT_EQ(r.status, Status::success);
        EXPECT_LE(r.measure->size(), 3u);
        sum += static_cast<double>(r.iterations);
    }
    const double p = 0.5;
    EXPECT_NEAR(sum / runs, 1.0 / p, 4.0 * std::sqrt((1.0 - p) / (p * p) / runs));
}

TEST(NaiveScheme, TwoPointModeB) {
    const RngStream base(8, 0);
    const std::size_t runs = 1000;
    double sum = 0.0;
    for (std::size_t i = 0; i < runs; ++i) {
        RngStream s = base.substream(i);
        sum += static_cast<double>(naive_scheme(dist::two_point(0.1), NaiveMode::b, std::nullopt, s).iterations);
    }
    const double p = 0.18;  // 1 - 0.1^2 - 0.9^2
    EXPECT_NEAR(sum / runs, 1.0 / p, 4.0 * std::sqrt((1.0 - p) / (p * p) / runs));
}

TEST(NaiveScheme, PointMassOneIteration) {
    RngStream s(9, 0);
    const Vector at{1.0, 2.0, 3.0};
    const auto r = naive_scheme(dist::point_mass(at), NaiveMode::b, at, s);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.status, Status::success);
}

TEST(NaiveScheme, ModeAGaussianAndEmpirical) {
    RngStream s(10, 0);
    const auto g = naive_scheme(dist::gaussian(2), NaiveMode::a, std::nullopt, s);
    expect_valid_rule(g, 2);
    const auto emp = dist::empirical(WeightedMeasure::uniform(dist::sample(dist::gaussian(2), 50, s)));
    const auto e = naive_scheme(emp, NaiveMode::a, dist::mean(emp), s);
    expect_valid_rule(e, 2);
}

TEST(Verify, TamperedWeightIsNamed) {
    RngStream s(11, 0);
    const auto r = run_algorithm1(dist::gaussian(2), std::nullopt, s);
    ASSERT_EQ(r.status, Status::success);
    Vector w = r.measure->weights();
    w[0] = -w[0];
    const auto v = verify_cubature(r.measure->support(), w, r.target, 1e-8);
    EXPECT_FALSE(v.pass);
    EXPECT_EQ(v.code, VerifyCode::violation);
    ASSERT_FALSE(v.violations.empty());
    EXPECT_EQ(v.violations.front(), "negative-weight: index 0");
}

TEST(Verify, EmptyMeasureIsDegenerate) {
    const auto v = verify_cubature(PointSet{}, {}, Vector{0.0}, 1e-8);
    EXPECT_FALSE(v.pass);
    EXPECT_EQ(v.code, VerifyCode::degenerate_input);
}

TEST(Serialization, ResultJson) {
    RngStream s(12, 0);
    const auto r = run_algorithm1(dist::gaussian(2), std::nullopt, s);
    const auto j = to_json(r);
    EXPECT_EQ(j.at("status"), "success");
    EXPECT_EQ(j.at("k"), r.k);
}

#include <gtest/gtest.h>

#include <numbers>

#include "randhull/dist/exact.hpp"
#include "randhull/dist/moments.hpp"
#include "randhull/dist/sample.hpp"
#include "randhull/dist/spec.hpp"

using namespace randhull;
using random::RngStream;
using nlohmann::json;

namespace {

// Sample mean and covariance of n draws.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> sample_moments(const dist::DistributionSpec& spec, std::size_t n,
                                                           std::uint64_t seed) {
    RngStream r(seed, 0);
    const PointSet p = dist::sample(spec, n, r);
    const auto d = static_cast<Eigen::Index>(spec.dim());
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < d; ++k) m(k) += p[i][static_cast<std::size_t>(k)] / static_cast<double>(n);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd y(d);
        for (Eigen::Index k = 0; k < d; ++k) y(k) = p[i][static_cast<std::size_t>(k)] - m(k);
        v += y * y.transpose() / static_cast<double>(n);
    }
    return {m, v};
}

std::string error_of(const json& j) {
    try {
        dist::make_spec(j);
    } catch (const dist::spec_error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Spec, ParsesEveryKind) {
    EXPECT_EQ(dist::make_spec(json::parse(R"({"kind":"gaussian","dim":3})")).dim(), 3u);
    EXPECT_EQ(dist::make_spec(json::parse(R"({"kind":"rademacher","dim":2})")).dim(), 2u);
    EXPECT_EQ(dist::make_spec(json::parse(R"({"kind":"two_point","epsilon":0.2})")).dim(), 1u);
    EXPECT_EQ(dist::make_spec(json::parse(R"({"kind":"spiked_box","dim":3,"epsilon":0.2})")).dim(), 3u);
    EXPECT_EQ(dist::make_spec(json::parse(R"({"kind":"trig","dim":4})")).dim(), 4u);
    const auto emp = dist::make_spec(json::parse(R"({"kind":"empirical","points":[[0,0],[1,0],[0,1]],"weights":[0.5,0.25,0.25]})"));
    EXPECT_EQ(emp.dim(), 2u);
    const Vector mu = dist::mean(emp);
    EXPECT_DOUBLE_EQ(mu[0], 0.25);
    const auto sm = dist::make_spec(json::parse(R"({"kind":"smoothed","radius":0.1,"base":{"kind":"gaussian","dim":2}})"));
    EXPECT_EQ(sm.dim(), 2u);
}

TEST(Spec, RoundTripsThroughJson) {
    for (const auto& s : {dist::gaussian(2), dist::two_point(0.3), dist::spiked_box(2, 0.2), dist::trig(3),
                          dist::smooth(dist::rademacher(2), 0.5)}) {
        const auto back = dist::make_spec(dist::to_json(s));
        EXPECT_EQ(dist::to_json(back), dist::to_json(s));
    }
}

TEST(Spec, ErrorsNameTheField) {
    EXPECT_NE(error_of(json::parse(R"({"kind":"gaussian"})")).find("dim"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"gaussian","dim":0})")).find("dim"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"two_point"})")).find("epsilon"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"two_point","epsilon":1.5})")).find("epsilon"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"empirical","points":[]})")).find("points"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"empirical","points":[[0],[1]],"weights":[0.9,0.9]})")).find("weights"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"smoothed","base":{"kind":"gaussian","dim":1}})")).find("radius"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"kind":"cauchy","dim":1})")).find("kind"), std::string::npos);
    EXPECT_NE(error_of(json::parse("[1,2]")).find("object"), std::string::npos);
}

TEST(Sample, MomentsMatchExactCovariance) {
    const std::size_t n = 200000;
    for (const auto& s : {dist::gaussian(3), dist::rademacher(2), dist::two_point(0.3), dist::spiked_box(3, 0.25),
                          dist::trig(3), dist::smooth(dist::gaussian(2), 0.5)}) {
        const auto [m, v] = sample_moments(s, n, 17);
        const Eigen::MatrixXd exact = dist::covariance(s);
        const double scale = exact.diagonal().maxCoeff();
        for (Eigen::Index k = 0; k < m.size(); ++k)
            EXPECT_NEAR(m(k), 0.0, 5.0 * std::sqrt(exact(k, k) / n)) << s.name();
        // fourth moments are bounded for every law here; 3% is well over 5 sigma at this n
        EXPECT_LT((v - exact).cwiseAbs().maxCoeff(), 0.03 * scale) << s.name();
    }
}

TEST(Sample, EmpiricalPicksAtomsByWeight) {
    const auto spec = dist::empirical(WeightedMeasure(PointSet::from_rows({{0.0}, {1.0}, {2.0}}), {0.2, 0.5, 0.3}));
    RngStream r(3, 0);
    const PointSet p = dist::sample(spec, 100000, r);
    std::array<int, 3> counts{};
    for (std::size_t i = 0; i < p.size(); ++i) ++counts[static_cast<std::size_t>(p[i][0])];
    EXPECT_NEAR(counts[0] / 1e5, 0.2, 5.0 * std::sqrt(0.16 / 1e5));
    EXPECT_NEAR(counts[1] / 1e5, 0.5, 5.0 * std::sqrt(0.25 / 1e5));
}

TEST(Sample, PrefixEqualsShorterSample) {
    RngStream a(9, 4), b(9, 4);
    const PointSet longer = dist::sample(dist::gaussian(2), 50, a);
    const PointSet shorter = dist::sample(dist::gaussian(2), 20, b);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(longer[i][k], shorter[i][k]);
}

TEST(Sample, SmoothingIsCoupledPointByPoint) {
    const auto base = dist::empirical(WeightedMeasure::uniform(PointSet::from_rows({{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}})));
    const double r = 0.05;
    RngStream a(1, 1), b(1, 1);
    const PointSet p = dist::sample(base, 500, a);
    const PointSet q = dist::sample(dist::smooth(base, r), 500, b);
    for (std::size_t i = 0; i < 500; ++i) {
        const Vector diff{p[i][0] - q[i][0], p[i][1] - q[i][1]};
        EXPECT_LE(norm(diff), r + 1e-15);
    }
}

TEST(Sample, TwoPointAndSpikedBoxSupports) {
    RngStream r(2, 0);
    const PointSet tp = dist::sample(dist::two_point(0.25), 1000, r);
    for (std::size_t i = 0; i < tp.size(); ++i) EXPECT_TRUE(tp[i][0] == 4.0 || std::abs(tp[i][0] + 4.0 / 3.0) < 1e-15);
    const PointSet sb = dist::sample(dist::spiked_box(3, 0.2), 1000, r);
    for (std::size_t i = 0; i < sb.size(); ++i) {
        if (sb[i][2] > 0) {
            EXPECT_EQ(sb[i][2], 5.0);
            EXPECT_EQ(sb[i][0], 0.0);
        } else {
            EXPECT_DOUBLE_EQ(sb[i][2], -1.25);
            EXPECT_LE(std::abs(sb[i][0]), 1.0);
        }
    }
}

TEST(Exact, TwoPointFormula) {
    const Vector zero{0.0};
    for (double e : {0.1, 0.25, 0.5})
        for (std::uint64_t n = 1; n <= 12; ++n) {
            const double expected = n == 1 ? 0.0 : 1.0 - std::pow(e, n) - std::pow(1.0 - e, n);
            EXPECT_NEAR(*dist::exact_p(dist::two_point(e), n, zero), expected, 1e-15);
        }
}

TEST(Exact, GaussianWendelAndTukey) {
    EXPECT_DOUBLE_EQ(*dist::exact_p(dist::gaussian(2), 4, Vector{0.0, 0.0}), 0.5);
    EXPECT_FALSE(dist::exact_p(dist::gaussian(2), 4, Vector{0.1, 0.0}).has_value());
    EXPECT_DOUBLE_EQ(*dist::exact_tukey(dist::gaussian(3), Vector{0.0, 0.0, 0.0}), 0.5);
    EXPECT_NEAR(*dist::exact_tukey(dist::gaussian(2), Vector{0.6, 0.8}), util::normal_cdf(-1.0), 1e-15);
}

TEST(Exact, TukeyOneDimensionalOracle) {
    // two-point(eps) at 0: the closed half-lines hold eps and 1-eps
    EXPECT_DOUBLE_EQ(*dist::exact_tukey(dist::two_point(0.2), Vector{0.0}), 0.2);
    const auto emp = dist::empirical(WeightedMeasure(PointSet::from_rows({{0.0}, {1.0}, {3.0}}), {0.3, 0.3, 0.4}));
    EXPECT_NEAR(*dist::exact_tukey(emp, Vector{1.0}), 0.6, 1e-15);
    EXPECT_NEAR(*dist::exact_tukey(emp, Vector{2.0}), 0.4, 1e-15);
    EXPECT_NEAR(*dist::exact_tukey(emp, Vector{2.0}, 1.0), 0.7, 1e-15);
}

TEST(Exact, SpikedBoxSmallN) {
    const auto spec = dist::spiked_box(2, 0.2);
    const Vector zero{0.0, 0.0};
    EXPECT_EQ(*dist::exact_p(spec, 2, zero), 0.0);
    // n = d+1: the spike plus two box points straddling 0; 3 eps (1-eps)^2 / 2
    EXPECT_NEAR(*dist::exact_p(spec, 3, zero), 3 * 0.2 * 0.64 / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(*dist::exact_tukey(spec, zero), 0.2);
}

TEST(Moments, GaussianAnalytic) {
    RngStream r(0, 0);
    const auto m = dist::moment_stats(dist::gaussian(3), 1000, r);
    EXPECT_EQ(m.provenance, geom::Provenance::analytic);
    EXPECT_NEAR(*m.rho3, 2.0 * std::sqrt(2.0 / std::numbers::pi), 1e-14);
    EXPECT_NEAR(*m.m4, 15.0, 1e-12);
    // E|Z|^3 for a chi variable with 3 degrees of freedom: 8 sqrt(2/pi)
    EXPECT_NEAR(*m.m3, 8.0 * std::sqrt(2.0 / std::numbers::pi), 1e-12);
}

TEST(Moments, TrigBoundAndFourthMoment) {
    RngStream r(0, 0);
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto m = dist::moment_stats(dist::trig(d), 20000, r);
        EXPECT_NEAR(*m.norm_bound, std::sqrt(2.0 * d), 1e-14);
        EXPECT_NEAR(*m.m4, d * d + d / 2.0, 1e-12);
        // Monte Carlo check of m4 = E|sqrt2 X|^4
        RngStream s(d, 1);
        const PointSet p = dist::sample(dist::trig(d), 200000, s);
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double r2 = 2.0 * dot(p[i], p[i]);
            acc += r2 * r2;
        }
        EXPECT_NEAR(acc / 200000.0, *m.m4, 0.02 * *m.m4);
    }
}

TEST(Moments, FiniteSupportIsExact) {
    RngStream r(0, 0);
    const auto m = dist::moment_stats(dist::two_point(0.5), 1000, r);
    // symmetric +-2 with variance 4 whitens to +-1
    EXPECT_NEAR(*m.rho3, 1.0, 1e-12);
    EXPECT_NEAR(*m.norm_bound, 1.0, 1e-12);
}

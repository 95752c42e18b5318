#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "golden_values.hpp"
#include "halfway/analytic.hpp"
#include "halfway/errors.hpp"
#include "halfway/quadrature.hpp"

namespace {

using halfway::HalfwayParams;
using halfway::QuadOptions;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Params, RejectsOutOfDomain) {
    EXPECT_THROW(HalfwayParams(0.0, 0.5), halfway::DomainError);
    EXPECT_THROW(HalfwayParams(-1.0, 0.5), halfway::DomainError);
    EXPECT_THROW(HalfwayParams(std::numeric_limits<double>::infinity(), 0.5), halfway::DomainError);
    EXPECT_THROW(HalfwayParams(1.0, 0.0), halfway::DomainError);
    EXPECT_THROW(HalfwayParams(1.0, 1.0), halfway::DomainError);
    EXPECT_THROW(HalfwayParams(1.0, std::nan("")), halfway::DomainError);
    EXPECT_NO_THROW(HalfwayParams(1.0, 1e-12));
    EXPECT_NO_THROW(HalfwayParams(1.0, 1.0 - 1e-12));
}

TEST(NormalCdf, TailsWithoutCancellation) {
    EXPECT_DOUBLE_EQ(halfway::normal_cdf(0.0), 0.5);
    EXPECT_NEAR(rel(halfway::normal_cdf(-10.0), 7.6198530241605260e-24), 0.0, 1e-13);
    EXPECT_GT(halfway::normal_cdf(-37.0), 0.0);
}

TEST(NormalCdf, MatchesQuadratureOfDensity) {
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
    for (double z : {-8.0, -2.5, 0.0, 1.0, 3.0}) {
        const auto upper = halfway::integrate_semi_infinite(pdf, z, QuadOptions{.abs_tol = 0.0, .rel_tol = 1e-13});
        EXPECT_NEAR(1.0 - halfway::normal_cdf(z), upper.value, 1e-13 * upper.value + 1e-16) << z;
    }
}

TEST(HittingTime, CdfMatchesQuadratureOfDensity) {
    for (double x : {0.5, 1.0, 3.0}) {
        for (double t : {0.01, 1.0, 100.0}) {
            const auto r = halfway::integrate_adaptive([x](double s) { return s <= 0.0 ? 0.0 : halfway::hitting_time_density(x, s); },
                                                       0.0, t, QuadOptions{.abs_tol = 1e-14});
            EXPECT_NEAR(halfway::hitting_time_cdf(x, t), r.value, 1e-13) << x << ' ' << t;
        }
    }
}

TEST(HittingTime, DensityAndCdf) {
    EXPECT_LT(rel(halfway::hitting_time_density(1.0, 1.0), golden::kHitDensity_x1_t1), 1e-14);
    EXPECT_LT(rel(halfway::hitting_time_density(2.0, 1.0), golden::kHitDensity_x2_t1), 1e-14);
    EXPECT_LT(rel(halfway::hitting_time_cdf(1.0, 1.0), golden::kHitCdf_x1_t1), 1e-14);
    EXPECT_LT(rel(halfway::hitting_time_cdf(1.0, 1e3), golden::kHitCdf_x1_t1e3), 1e-14);
    EXPECT_LT(rel(1.0 - halfway::hitting_time_cdf(1.0, 1e6), golden::kCensored_x1_t1e6), 1e-9);
    EXPECT_EQ(halfway::hitting_time_density(1.0, 1e-8), 0.0);
    EXPECT_EQ(halfway::hitting_time_cdf(1.0, 0.0), 0.0);
    EXPECT_THROW((void)halfway::hitting_time_density(1.0, 0.0), halfway::DomainError);
    EXPECT_THROW((void)halfway::hitting_time_density(0.0, 1.0), halfway::DomainError);
    EXPECT_THROW((void)halfway::hitting_time_cdf(1.0, -1.0), halfway::DomainError);
}

TEST(HittingTime, CdfDerivativeIsDensity) {
    constexpr double h = 1e-5;
    for (double t : {0.1, 1.0, 7.0}) {
        const double slope = (halfway::hitting_time_cdf(1.0, t + h) - halfway::hitting_time_cdf(1.0, t - h)) / (2 * h);
        EXPECT_NEAR(slope / halfway::hitting_time_density(1.0, t), 1.0, 1e-7);
    }
}

TEST(KilledTransition, StableForTinyProducts) {
    EXPECT_LT(rel(halfway::killed_transition_density(1.0, 1.0, 1.0), golden::kKilled_1_1_1), 1e-14);
    EXPECT_LT(rel(halfway::killed_transition_density(1.0, 1e-3, 1.0), golden::kKilled_1_1em3_1), 1e-14);
    // Naive difference of Gaussians loses ~8 digits here.
    EXPECT_LT(rel(halfway::killed_transition_density(1e-4, 1.0, 1e-4), golden::kKilled_1em4_1_1em4), 1e-12);
    EXPECT_EQ(halfway::killed_transition_density(1.0, 1.0, 0.0), 0.0);
}

TEST(HalfwayDensity, MatchesIndependentMixture) {
    EXPECT_LT(rel(halfway::halfway_density(HalfwayParams(1.0, 0.5), 1.0), golden::kDensity_u05_x1_y1), 1e-14);
    EXPECT_LT(rel(halfway::halfway_density(HalfwayParams(2.0, 0.5), 2.0), golden::kDensity_u05_x2_y2), 1e-14);
    EXPECT_LT(rel(halfway::halfway_density(HalfwayParams(0.5, 0.1), 3.0), golden::kDensity_u01_x05_y3), 1e-14);
    EXPECT_LT(rel(halfway::halfway_density(HalfwayParams(2.0, 0.9), 0.05), golden::kDensity_u09_x2_y005), 1e-14);
}

TEST(HalfwayDensity, BoundaryAndDomain) {
    const HalfwayParams p(1.0, 0.5);
    EXPECT_EQ(halfway::halfway_density(p, 0.0), 0.0);
    EXPECT_THROW((void)halfway::halfway_density(p, -1.0), halfway::DomainError);
    EXPECT_THROW((void)halfway::halfway_density(p, std::nan("")), halfway::DomainError);
    // Extreme scales stay finite and follow the tail law.
    const double y = 1e150;
    EXPECT_LT(rel(y * y * halfway::halfway_density(p, y), halfway::tail_constant(p)), 1e-12);
    const HalfwayParams tiny(1e-200, 0.3);
    EXPECT_LT(rel(halfway::halfway_density(tiny, 1e-200), 1e200 * halfway::halfway_density(HalfwayParams(1.0, 0.3), 1.0)),
              1e-13);
}

TEST(HalfwayDensity, ScaleInvariance) {
    for (double u : {0.1, 0.37, 0.5, 0.9}) {
        for (double x : {0.3, 1.7, 40.0}) {
            for (double r : {0.01, 0.5, 1.0, 3.0, 200.0}) {
                const double direct = halfway::halfway_density(HalfwayParams(x, u), r * x);
                const double scaled = halfway::halfway_density(HalfwayParams(1.0, u), r) / x;
                EXPECT_LT(rel(direct, scaled), 1e-13) << u << ' ' << x << ' ' << r;
            }
        }
    }
}

TEST(HalfwayDensity, TailLaw) {
    for (double u : {0.1, 0.5, 0.9}) {
        const HalfwayParams p(1.5, u);
        EXPECT_NEAR(halfway::tail_constant(p), 4.0 * 1.5 * std::sqrt(u * (1.0 - u)) / std::numbers::pi, 1e-15);
        double previous = 1.0;
        for (double k : {1e2, 1e3, 1e4, 1e6}) {
            const double y = k * p.x();
            const double err = std::abs(y * y * halfway::halfway_density(p, y) / halfway::tail_constant(p) - 1.0);
            EXPECT_LE(err, previous + 1e-15);
            previous = err;
        }
        EXPECT_LT(previous, 1e-9);
    }
}

TEST(HalfwayCdf, Golden) {
    const HalfwayParams p(1.0, 0.5);
    EXPECT_LT(std::abs(halfway::halfway_cdf(p, 1.0) - golden::kCdf_u05_x1_y1), 1e-12);
    EXPECT_LT(std::abs(halfway::halfway_cdf(HalfwayParams(2.0, 0.25), 0.3) - golden::kCdf_u025_x2_y03), 1e-12);
    EXPECT_LT(rel(halfway::halfway_survival(p, 100.0), golden::kSurvival_u05_x1_y100), 1e-10);
    EXPECT_LT(rel(halfway::halfway_survival(HalfwayParams(1.0, 0.9), 1e8), golden::kSurvival_u09_x1_y1e8), 1e-10);
    EXPECT_EQ(halfway::halfway_cdf(p, 0.0), 0.0);
    EXPECT_EQ(halfway::halfway_cdf(p, std::numeric_limits<double>::infinity()), 1.0);
}

TEST(HalfwayCdf, MonotoneAndComplementary) {
    const HalfwayParams p(0.7, 0.3);
    double previous = 0.0;
    for (double y = 0.01; y < 1e4; y *= 1.7) {
        const double f = halfway::halfway_cdf(p, y);
        EXPECT_GE(f, previous);
        EXPECT_NEAR(f + halfway::halfway_survival(p, y), 1.0, 1e-12);
        previous = f;
    }
}

TEST(HalfwayQuantile, RoundTripAndGolden) {
    const HalfwayParams p(1.0, 0.5);
    EXPECT_LT(rel(halfway::halfway_quantile(p, 0.5), golden::kMedian_u05_x1), 1e-9);
    for (double u : {0.1, 0.5, 0.9}) {
        for (double x : {0.5, 2.0}) {
            const HalfwayParams q(x, u);
            for (double level : {1e-6, 0.01, 0.5, 0.99, 0.999999}) {
                EXPECT_NEAR(halfway::halfway_cdf(q, halfway::halfway_quantile(q, level)), level, 1e-9);
            }
        }
    }
    EXPECT_THROW((void)halfway::halfway_quantile(p, 0.0), halfway::DomainError);
    EXPECT_THROW((void)halfway::halfway_quantile(p, 1.0), halfway::DomainError);
}

TEST(ExcursionMarginal, DensityCdfAndMass) {
    EXPECT_LT(rel(halfway::excursion_marginal_density(1.0, 0.5, 1.0, 1.0), golden::kExcursionDensity_1_05_1_y1), 1e-13);
    EXPECT_LT(std::abs(halfway::excursion_marginal_cdf(1.0, 0.5, 1.0, 0.7) - golden::kExcursionCdf_1_05_1_y07), 1e-11);
    EXPECT_NEAR(halfway::excursion_marginal_cdf(2.0, 0.25, 3.0, 1e3), 1.0, 1e-12);
    EXPECT_EQ(halfway::excursion_marginal_density(1.0, 0.5, 1.0, 0.0), 0.0);
}

}  // namespace

#include "germflow/conditions.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace germflow {
namespace {

using testutil::family;
using testutil::poly;

TEST(LineDistance, SpecifiedValues) {
    const std::vector<Scalar> u{Scalar{2.0}, Scalar{4.0}};
    const std::vector<Scalar> w{Scalar{2.0}, Scalar{1.0}};
    const InfLambdaResult r = line_distance(u, w);
    EXPECT_NEAR(r.value, 6.0 / std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(r.minimizer.real(), -8.0 / 5.0, 1e-12);
    EXPECT_FALSE(r.degenerate);
    EXPECT_NEAR(r.value, testutil::line_distance_golden_section(u, w), 1e-9);

    const InfLambdaResult same = line_distance(u, u);
    EXPECT_NEAR(same.value, 0.0, 1e-12);
    EXPECT_NEAR(same.minimizer.real(), -1.0, 1e-12);

    const std::vector<Scalar> zero{Scalar{0.0}, Scalar{0.0}};
    const InfLambdaResult degen = line_distance(u, zero);
    EXPECT_TRUE(degen.degenerate);
    EXPECT_NEAR(degen.value, vec_norm(u), 1e-15);
    EXPECT_EQ(degen.minimizer, Scalar(0.0));

    EXPECT_THROW(line_distance(u, std::vector<Scalar>{Scalar{1.0}}), InputError);
}

TEST(LineDistance, MatchesNumericalMinimizationOnRandomPairs) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 150; ++trial) {
        const FieldTag field = trial % 2 == 0 ? FieldTag::Real : FieldTag::Complex;
        const int n = 2 + trial % 3;
        const auto u = testutil::random_point(rng, n, field, 5.0);
        const auto w = testutil::random_point(rng, n, field, 5.0);
        if (vec_norm(w) < 0.1) continue;
        const InfLambdaResult r = line_distance(u, w);
        const double oracle = field == FieldTag::Real
                                  ? testutil::line_distance_golden_section(u, w)
                                  : testutil::line_distance_grid_2d(u, w);
        EXPECT_LE(std::abs(r.value - oracle), 1e-8 * (1.0 + oracle)) << "trial " << trial;

        // plugging the closed-form minimizer back can never beat the value
        double plugged = 0.0;
        for (int i = 0; i < n; ++i)
            plugged += std::norm(u[static_cast<std::size_t>(i)] + r.minimizer * w[static_cast<std::size_t>(i)]);
        EXPECT_GE(std::sqrt(plugged), r.value - 1e-10 * (1.0 + r.value));
    }
}

TEST(LineDistance, PythagorasForTheProjection) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const FieldTag field = trial % 2 == 0 ? FieldTag::Real : FieldTag::Complex;
        const auto u = testutil::random_point(rng, 3, field, 4.0);
        const auto w = testutil::random_point(rng, 3, field, 4.0);
        if (vec_norm(w) < 0.1) continue;
        const InfLambdaResult r = line_distance(u, w);
        const double lhs = r.value * r.value * norm_sq(w) + std::norm(hermitian_dot(u, w));
        const double rhs = norm_sq(u) * norm_sq(w);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + rhs));
    }
}

TEST(Delta, SpecifiedValues) {
    const GermFamily fam = family("x^2 + y^2", "x*y");
    const Point p{Scalar{1.0}, Scalar{2.0}};
    EXPECT_NEAR(delta(fam, p), 36.0, 1e-12);

    // parallel gradients: Cauchy-Schwarz equality
    const GermFamily par = family("x^2 + y^2", "2*x^2 + 2*y^2");
    EXPECT_LE(delta(par, p), 1e-9 * 400.0);

    const GermFamily ortho = family("x", "y");
    EXPECT_NEAR(delta(ortho, Point{Scalar{0.0}, Scalar{0.0}}), 1.0, 1e-15);
}

TEST(Delta, NonNegativeOnRandomFamilies) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 400; ++trial) {
        const FieldTag field = trial % 2 == 0 ? FieldTag::Real : FieldTag::Complex;
        const int nvars = 2 + trial % 2;
        const GermFamily fam(testutil::random_germ_poly(rng, nvars, 3, field),
                             testutil::random_germ_poly(rng, nvars, 3, field), field);
        const Point p = testutil::random_point(rng, nvars, field, 2.0);
        double d = 0.0;
        EXPECT_NO_THROW(d = delta(fam, p));
        EXPECT_GE(d, 0.0);
    }
}

TEST(PhiRatio, SpecifiedValues) {
    const GermFamily fam = family("x^2 + y^2", "x*y");
    const Point p{Scalar{1.0}, Scalar{2.0}};
    const PhiRatio r = phi_ratio(fam, p);
    EXPECT_FALSE(r.indeterminate);
    EXPECT_NEAR(r.value, std::sqrt(5.0) / 3.0, 1e-12);

    // g vanishes, denominator does not
    const PhiRatio zero = phi_ratio(fam, Point{Scalar{1.0}, Scalar{0.0}});
    EXPECT_EQ(zero.value, 0.0);

    // f = g: denominator identically 0 while g != 0
    const GermFamily same = family("x*y", "x*y");
    const PhiRatio inf = phi_ratio(same, p);
    EXPECT_FALSE(inf.indeterminate);
    EXPECT_TRUE(std::isinf(inf.value));

    // 0/0 at the origin
    const PhiRatio indet = phi_ratio(same, Point{Scalar{0.0}, Scalar{0.0}});
    EXPECT_TRUE(indet.indeterminate);
}

TEST(ConditionPointValues, C01DetectsTheKillingLine) {
    // F = x^2 + t x: grad_x F vanishes on t = -2x while g = x does not
    const GermFamily fam = family("x^2", "x");
    const double s = 1e-3;
    const Point p{Scalar{s}, Scalar{-2.0 * s}};
    const auto [num, den] = condition_point_values(fam, ConditionKind::C0_1, p);
    EXPECT_NEAR(num, s, 1e-18);
    EXPECT_EQ(den, 0.0);
}

TEST(ConditionPointValues, GermConditionZeroesAtOrigin) {
    const GermFamily fam = family("x^3 + y^6", "x*y^4");
    const Point origin{Scalar{0.0}, Scalar{0.0}, Scalar{0.1}};
    const auto [num26, den26] = condition_point_values(fam, ConditionKind::C2_6_LeSaito, origin);
    EXPECT_EQ(num26, 0.0);
    EXPECT_EQ(den26, 0.0);

    const auto [num27, den27] = condition_point_values(fam, ConditionKind::C2_7_Kuo, origin);
    EXPECT_EQ(num27, 0.0);
    EXPECT_EQ(den27, 0.0);
}

TEST(ConditionPointValues, CorAgIiDegeneratesWhenGEqualsF) {
    const GermFamily fam = family("x*y", "x*y");
    const Point x{Scalar{1.0}, Scalar{2.0}};
    const Point lifted = lift_to_zero_set(fam, x);  // t = -1
    const ConditionSample s = condition_sample(fam, ConditionKind::CorAg_ii, lifted);
    EXPECT_GT(s.numerator, 0.0);
    EXPECT_TRUE(s.denominator_degenerate || s.denominator == 0.0);
}

TEST(ConditionPointValues, PhiMatchesCorAgIiDenominator) {
    // the lambda-shift makes the CorAg_ii denominator t-free: it equals
    // phi's denominator at any t
    const GermFamily fam = family("x^2 + y^2", "x*y");
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const Point x = testutil::random_point(rng, 2, FieldTag::Real, 1.5);
        const double t = uniform_in(rng, -0.5, 0.5);
        Point p = x;
        p.push_back(Scalar{t});
        const ConditionSample s = condition_sample(fam, ConditionKind::CorAg_ii, p);
        const double phi_den = line_distance(fam.grad_f(x), fam.grad_g(x)).value;
        EXPECT_LE(std::abs(s.denominator - phi_den), 1e-9 * (1.0 + phi_den));
    }
}

TEST(ConditionPointValues, RejectsWrongFamilyShapeForChartKinds) {
    const GermFamily fam = family("x^2 + y^2", "x*y");
    const Point p{Scalar{0.1}, Scalar{0.1}, Scalar{0.0}};
    EXPECT_THROW(condition_point_values(fam, ConditionKind::C3_2, p), InputError);
    EXPECT_THROW(condition_point_values(fam, ConditionKind::C3_3, p), InputError);
}

TEST(LiftToZeroSet, SpecifiedValues) {
    const GermFamily fam = family("x^2 + y^2", "x*y");
    for (double s : {0.3, 0.1, 0.02}) {
        const Point lifted = lift_to_zero_set(fam, Point{Scalar{s}, Scalar{s}});
        EXPECT_NEAR(lifted.back().real(), -2.0, 1e-12);
    }

    // f vanishes, g does not: t = 0
    const GermFamily fam2 = family("x^2 - y^2", "x*y");
    const Point onzero = lift_to_zero_set(fam2, Point{Scalar{1.0}, Scalar{1.0}});
    EXPECT_EQ(onzero.back(), Scalar(0.0));

    EXPECT_THROW(lift_to_zero_set(fam, Point{Scalar{0.0}, Scalar{0.0}}), NotLiftableError);
}

TEST(LiftToZeroSet, LandsOnTheZeroSet) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const FieldTag field = trial % 2 == 0 ? FieldTag::Real : FieldTag::Complex;
        const GermFamily fam(testutil::random_germ_poly(rng, 2, 3, field),
                             testutil::random_germ_poly(rng, 2, 3, field), field);
        const Point x = testutil::random_point(rng, 2, field, 1.5);
        Point lifted;
        try {
            lifted = lift_to_zero_set(fam, x);
        } catch (const NotLiftableError&) {
            continue;
        }
        const Scalar fv = fam.eval_F(Point(lifted.begin(), lifted.end() - 1), lifted.back());
        EXPECT_LE(std::abs(fv), 1e-12 * (1.0 + std::abs(fam.eval_f(x))));
    }
}

TEST(EtaSplitBound, NeverBeatsTheEtaZeroCandidate) {
    const GermFamily fam = family("x^2 + y^2", "x*y");
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        Point p = testutil::random_point(rng, 2, FieldTag::Real, 1.0);
        p.push_back(Scalar{uniform_in(rng, -0.5, 0.5)});
        const auto [num, bound] = eta_split_bound(fam, p);
        const auto [x, t] = fam.split(p);
        const double at_zero = vec_norm(x) * vec_norm(fam.raw_grad_g(x));
        EXPECT_LE(bound, at_zero + 1e-12);
        EXPECT_GE(bound, 0.0);
        EXPECT_EQ(num, std::abs(fam.eval_g(x)));
    }
}

}  // namespace
}  // namespace germflow

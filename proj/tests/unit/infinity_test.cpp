#include "germflow/infinity.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace germflow {
namespace {

using testutil::poly;

TEST(BuildInfinityFamily, SpecifiedLocalForms) {
    // f = x in one variable: local F = 1 - t y0
    const InfinityFamily lin = build_infinity_family(poly("x"), 1);
    EXPECT_EQ(lin.degree, 1);
    EXPECT_EQ(lin.f_loc, Polynomial::constant(1, Scalar{1.0}));
    EXPECT_EQ(lin.g_loc, Polynomial::monomial(1, 0, 1));

    // single monomial x1^d in its own chart: local F = 1 - t y0^d
    const InfinityFamily pw = build_infinity_family(poly("x^4"), 1);
    EXPECT_EQ(pw.f_loc, Polynomial::constant(1, Scalar{1.0}));
    EXPECT_EQ(pw.g_loc, Polynomial::monomial(1, 0, 4));

    // Broughton at the y-direction chart: f_loc = y1^2 - y1 y0^2
    const InfinityFamily br = build_infinity_family(poly("x^2*y - x"), 2);
    Polynomial::TermMap expected;
    expected[{0, 2}] = Scalar{1.0};
    expected[{2, 1}] = Scalar{-1.0};
    EXPECT_EQ(br.f_loc, Polynomial(2, expected));
    EXPECT_EQ(br.g_loc, Polynomial::monomial(2, 0, 3));

    EXPECT_THROW(build_infinity_family(poly("3", 1), 1), InputError);
    EXPECT_THROW(build_infinity_family(poly("x"), 2), InputError);
}

TEST(BuildInfinityFamily, ChartConsistencyAtRandomPoints) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const int nvars = 2 + trial % 2;
        const Polynomial f = testutil::random_germ_poly(rng, nvars, 3, FieldTag::Complex, 3.0);
        if (f.degree() < 1) continue;
        const int chart = 1 + static_cast<int>(rng() % nvars);
        const InfinityFamily inf = build_infinity_family(f, chart);
        const int d = inf.degree;

        // y0 near 1 keeps both sides well conditioned
        Point y = testutil::random_point(rng, nvars, FieldTag::Complex, 0.8);
        y[0] += Scalar{1.5, 0.0};
        const Scalar t = testutil::random_scalar(rng, FieldTag::Complex, 0.7);

        // local F(y, t) = y0^d (f(x) - t) under the chart inversion
        Point x(static_cast<std::size_t>(nvars));
        const Scalar inv = Scalar{1.0} / y[0];
        int j = 1;
        for (int i = 0; i < nvars; ++i) {
            if (i == chart - 1) {
                x[static_cast<std::size_t>(i)] = inv;
            } else {
                x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(j)] * inv;
                ++j;
            }
        }
        const Scalar lhs = inf.family.eval_F(y, t);
        Scalar scale{1.0};
        for (int k = 0; k < d; ++k) scale *= y[0];
        const Scalar rhs = scale * (f.eval(x) - t);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(rhs))) << "trial " << trial;
    }
}

TEST(BuildInfinityFamily, LineDistanceCollapsesToTailPartials) {
    // with g = y0^d, cancelling the y0 component leaves exactly the tail
    const InfinityFamily br = build_infinity_family(poly("x^2*y - x"), 2);
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        Point y = testutil::random_point(rng, 2, FieldTag::Complex, 1.0);
        if (std::abs(y[0]) < 0.1) continue;
        const Scalar t = testutil::random_scalar(rng, FieldTag::Complex, 1.0);
        const auto gF = br.family.grad_F(y, t);
        const auto gg = br.family.grad_g(y);
        const InfLambdaResult dist = line_distance(gF, gg);
        const auto raw = br.family.raw_grad_F(y, t);
        const double tail = std::abs(raw[1]);
        EXPECT_LE(std::abs(dist.value - tail), 1e-9 * (1.0 + tail));
    }
}

TEST(BuildInfinityFamily, ShiftedChartConsistency) {
    // center (0 : a : 1): x1 = (y1 + a)/y0, x2 = 1/y0
    const Polynomial f = testutil::poly("x^2*y - x + y^3");
    const Scalar a{0.7, -0.3};
    const InfinityFamily inf = build_infinity_family(f, 2, {a});
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        Point y = testutil::random_point(rng, 2, FieldTag::Complex, 0.6);
        y[0] += Scalar{1.2, 0.0};
        const Scalar t = testutil::random_scalar(rng, FieldTag::Complex, 0.5);
        const Point x{(y[1] + a) / y[0], Scalar{1.0} / y[0]};
        Scalar scale{1.0};
        for (int k = 0; k < inf.degree; ++k) scale *= y[0];
        const Scalar lhs = inf.family.eval_F(y, t);
        const Scalar rhs = scale * (f.eval(x) - t);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(rhs)));
    }
    EXPECT_THROW(build_infinity_family(f, 2, {a, a}), InputError);
}

std::vector<Arc> escape_suite(const Polynomial& f, int count, std::uint64_t seed) {
    const GermFamily probe(f, Polynomial::zero(f.nvars()), FieldTag::Complex);
    ArcSuiteSpec spec;
    spec.count = count;
    spec.target = ArcTarget::Infinity;
    return random_arc_suite(probe, spec, seed);
}

TEST(MalgrangeCheck, LinearPolynomialHoldsAtAnyT0) {
    const Polynomial f = poly("x", 2);  // f = x1 in two variables
    const std::vector<Arc> arcs = escape_suite(f, 16, 77);
    for (double t0 : {0.0, 1.0, -2.5}) {
        const MalgrangeVerdict v = malgrange_check(f, Scalar{t0, 0.0}, arcs);
        EXPECT_TRUE(v.holds) << "t0 = " << t0;
        EXPECT_FALSE(v.indeterminate);
    }
}

TEST(MalgrangeCheck, BroughtonWitnessInTheSuiteFails) {
    const Polynomial f = poly("x^2*y - x");
    std::vector<Arc> arcs = escape_suite(f, 8, 79);
    Arc witness = make_monomial_arc({1, -1}, {Scalar{1.0}, Scalar{0.5}});
    witness.set_id(100);
    arcs.push_back(witness);
    const MalgrangeVerdict v = malgrange_check(f, Scalar{0.0, 0.0}, arcs);
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->id(), 100);
}

TEST(MalgrangeCheck, BroughtonHoldsAwayFromZeroOnDefaultSuites) {
    const Polynomial f = poly("x^2*y - x");
    const std::vector<Arc> arcs = escape_suite(f, 16, 81);
    const MalgrangeVerdict v = malgrange_check(f, Scalar{1.0, 0.0}, arcs);
    EXPECT_TRUE(v.holds);
    EXPECT_FALSE(v.indeterminate);
}

TEST(MalgrangeCheck, RequiresEscapingArcs) {
    const Polynomial f = poly("x^2*y - x");
    const Arc origin_arc = make_monomial_arc({1, 1}, {Scalar{1.0}, Scalar{1.0}});
    EXPECT_THROW(malgrange_check(f, Scalar{0.0, 0.0}, {origin_arc}), InputError);
}

TEST(Check3233, BroughtonAgreesArcByArc) {
    const Polynomial f = poly("x^2*y - x");
    const InfinityFamily inf = build_infinity_family(f, 2);
    ArcSuiteSpec spec;
    spec.count = 32;
    spec.target = ArcTarget::Origin;
    const std::vector<Arc> arcs = random_arc_suite(inf.family, spec, 83);
    const Check3233Report report = check_32_33(f, 2, arcs);
    EXPECT_FALSE(report.vacuous);
    EXPECT_GT(report.per_arc.size(), 0u);
    EXPECT_EQ(report.agreement_fraction, 1.0);
}

TEST(Check3233, SelfChartIsVacuous) {
    // x^d in its own chart: the lift t = y0^{-d} diverges on every arc, so
    // no arc probes a finite-t0 center
    const Polynomial f = poly("x^3");
    const InfinityFamily inf = build_infinity_family(f, 1);
    ArcSuiteSpec spec;
    spec.count = 16;
    spec.target = ArcTarget::Origin;
    const std::vector<Arc> arcs = random_arc_suite(inf.family, spec, 85);
    const Check3233Report report = check_32_33(f, 1, arcs);
    EXPECT_TRUE(report.vacuous);
    EXPECT_EQ(report.discarded_t_divergent, 16);
    EXPECT_EQ(report.agreement_fraction, 1.0);
}

TEST(Check3233, ConstantY0ArcClassifiesBoundedOnBothSides) {
    const Polynomial f = poly("x^2*y - x");
    std::vector<LaurentSeries> coords{LaurentSeries({{0, Scalar{0.5}}}),
                                      LaurentSeries({{1, Scalar{1.0}}})};
    const Arc arc(coords, Arc::TMode::None);
    const Check3233Report report = check_32_33(f, 2, {arc});
    ASSERT_EQ(report.per_arc.size(), 1u);
    EXPECT_EQ(report.per_arc[0].class_32, ArcBoundedness::Bounded);
    EXPECT_EQ(report.per_arc[0].class_33, ArcBoundedness::Bounded);
    EXPECT_TRUE(report.per_arc[0].agree);
}

TEST(Check3233, DiscardsY0ZeroArcs) {
    const Polynomial f = poly("x^2*y - x");
    std::vector<LaurentSeries> coords{LaurentSeries{}, LaurentSeries({{1, Scalar{1.0}}})};
    const Arc arc(coords, Arc::TMode::None);
    const Check3233Report report = check_32_33(f, 2, {arc});
    EXPECT_EQ(report.discarded_y0_zero, 1);
    EXPECT_TRUE(report.vacuous);
}

TEST(AtypicalScan, FlagsOnlyTheAtypicalValue) {
    const Polynomial f = poly("x^2*y - x");
    SearchBudget budget;
    budget.restarts = 40;
    budget.iterations = 300;
    budget.seed = 3;
    const std::vector<Scalar> grid{Scalar{-1.0}, Scalar{0.0}, Scalar{1.0}};
    const std::vector<MalgrangeVerdict> verdicts = atypical_scan(f, grid, budget);
    ASSERT_EQ(verdicts.size(), 3u);
    // failures first
    EXPECT_FALSE(verdicts[0].holds);
    EXPECT_EQ(verdicts[0].t0, Scalar(0.0));
    EXPECT_TRUE(verdicts[1].holds);
    EXPECT_TRUE(verdicts[2].holds);
}

TEST(AtypicalScan, ProperLikePolynomialShowsNoFailures) {
    const Polynomial f = poly("x^2 + y^2");
    SearchBudget budget;
    budget.restarts = 24;
    budget.iterations = 200;
    budget.seed = 17;
    const std::vector<MalgrangeVerdict> verdicts =
        atypical_scan(f, {Scalar{0.0}, Scalar{1.0}}, budget);
    for (const MalgrangeVerdict& v : verdicts) EXPECT_TRUE(v.holds);
}

TEST(AtypicalScan, EmptyGridGivesEmptyList) {
    const Polynomial f = poly("x^2*y - x");
    EXPECT_TRUE(atypical_scan(f, {}, {}).empty());
}

}  // namespace
}  // namespace germflow

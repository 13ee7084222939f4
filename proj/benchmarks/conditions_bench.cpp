#include <benchmark/benchmark.h>

#include "germflow/poly_text.hpp"
#include "germflow/verdicts.hpp"

namespace {

using namespace germflow;

GermFamily benchmark_family() {
    return GermFamily(parse_polynomial("x^3 + y^6"), parse_polynomial("x*y^4"), FieldTag::Real);
}

void ConditionSampleC01(benchmark::State& state) {
    const GermFamily fam = benchmark_family();
    const Point p{Scalar{0.01}, Scalar{0.02}, Scalar{0.005}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(condition_point_values(fam, ConditionKind::C0_1, p));
    }
}
BENCHMARK(ConditionSampleC01);

void LineDistanceClosedForm(benchmark::State& state) {
    const std::vector<Scalar> u{Scalar{2.0, 0.5}, Scalar{4.0, -1.0}, Scalar{0.25, 0.0}};
    const std::vector<Scalar> w{Scalar{2.0, 0.0}, Scalar{1.0, 1.0}, Scalar{-0.5, 0.25}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(line_distance(u, w));
    }
}
BENCHMARK(LineDistanceClosedForm);

void CheckConditionSuite(benchmark::State& state) {
    const GermFamily fam = benchmark_family();
    ArcSuiteSpec spec;
    spec.count = static_cast<int>(state.range(0));
    const std::vector<Arc> arcs = random_arc_suite(fam, spec, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_condition(fam, ConditionKind::C0_1, arcs));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(CheckConditionSuite)->Arg(8)->Arg(32)->Arg(64)->Complexity(benchmark::oN);

}  // namespace

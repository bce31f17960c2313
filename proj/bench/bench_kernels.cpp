#include <benchmark/benchmark.h>

#include "tqc/conformal.hpp"
#include "tqc/generators.hpp"
#include "tqc/qsmod.hpp"
#include "tqc/turning.hpp"

using namespace tqc;

namespace {

ClosedCurve koch(int level) {
    CurveSpec s;
    s.kind = CurveKind::koch;
    s.level = level;
    return generate(s);
}

BoundaryMap cusp_map(std::size_t n) {
    CurveSpec s;
    s.kind = CurveKind::cusp;
    s.n = 4097;
    return arclength_param(generate(s), n);
}

void BM_turning_serial(benchmark::State& st) {
    const ClosedCurve c = koch(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(turning_constant_serial(c, 0.8).C_star);
    st.counters["n"] = static_cast<double>(c.size());
}

void BM_turning_parallel(benchmark::State& st) {
    const ClosedCurve c = koch(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(turning_constant(c, 0.8).C_star);
    st.counters["n"] = static_cast<double>(c.size());
}

void BM_weak_qs_serial(benchmark::State& st) {
    const BoundaryMap m = cusp_map(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(weak_qs_constant_serial(m, 0.5).weak_R);
}

void BM_weak_qs_parallel(benchmark::State& st) {
    const BoundaryMap m = cusp_map(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(weak_qs_constant(m, 0.5).weak_R);
}

void BM_koebe_check(benchmark::State& st) {
    CurveSpec s;
    s.kind = CurveKind::ellipse;
    s.a = 2.0;
    s.n = 512;
    const DiskMap m = zipper_fit(generate(s));
    const auto grid = disk_grid(static_cast<std::size_t>(st.range(0)), 0.95);
    for (auto _ : st) benchmark::DoNotOptimize(koebe_check(m, grid).pass);
}

}  // namespace

BENCHMARK(BM_turning_serial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_turning_parallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weak_qs_serial)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weak_qs_parallel)->Arg(128)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_koebe_check)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

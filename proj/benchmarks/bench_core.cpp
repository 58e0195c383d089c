#include <benchmark/benchmark.h>

#include "paralab/cohom.hpp"
#include "paralab/fixtures.hpp"
#include "paralab/moduli.hpp"
#include "paralab/orbit.hpp"
#include "paralab/series.hpp"

using namespace paralab;

// state.range(0) is the working precision in decimal digits throughout.

static void BM_SeriesCompose(benchmark::State& state) {
  PrecisionScope ps(static_cast<unsigned>(state.range(0)));
  int order = static_cast<int>(state.range(1));
  std::vector<Complex> a, b{Complex()};
  for (int k = 0; k <= order; ++k) a.push_back(Complex(Real(1) / (k + 1), Real(k % 3)));
  for (int k = 1; k <= order; ++k) b.push_back(Complex(Real(1) / k));
  Series outer(a), inner(b);
  for (auto _ : state) benchmark::DoNotOptimize(outer.compose(inner));
}
BENCHMARK(BM_SeriesCompose)->Args({32, 16})->Args({32, 48})->Args({80, 48});

static void BM_SectorialEvaluate(benchmark::State& state) {
  Context ctx{static_cast<unsigned>(state.range(0))};
  SectorialSolution h(fixtures::by_name("log2exp"), Rhs({ScalarSpec::parse("0"), ScalarSpec::parse("-1")}),
                      PetalKind::attracting, ctx);
  PrecisionScope ps(ctx);
  Complex z{Real(-0.2), Real(0.05)};
  for (auto _ : state) benchmark::DoNotOptimize(h.evaluate(z));
}
BENCHMARK(BM_SectorialEvaluate)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_AreaEvaluate(benchmark::State& state) {
  Context ctx{static_cast<unsigned>(state.range(0))};
  AreaEvaluator ev(orbit_for_area(fixtures::by_name("f0"), Complex(Real(-0.5)), 1e-5, ctx));
  PrecisionScope ps(ctx);
  Real eps("3.3e-4");
  for (auto _ : state) benchmark::DoNotOptimize(ev.area(eps));
}
BENCHMARK(BM_AreaEvaluate)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

static void BM_Moment(benchmark::State& state) {
  MomentOptions o;
  o.digits = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m_moment(fixtures::by_name("f0"), 1, o));
}
BENCHMARK(BM_Moment)->Arg(40)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK_MAIN();

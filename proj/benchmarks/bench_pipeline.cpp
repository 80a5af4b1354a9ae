#include "arcszego/christoffel.hpp"
#include "arcszego/faber.hpp"
#include "arcszego/szego.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace arcszego;
using C = std::complex<double>;

namespace {

ArcGeometry<double> parabola() {
  std::vector<double> t;
  std::vector<C> z;
  for (int j = 0; j <= 256; ++j) {
    const double tt = j == 256 ? 1.0 : 0.5 - 0.5 * std::cos(M_PI * j / 256);
    const double x = 2 * tt - 1;
    t.push_back(tt);
    z.push_back(C(x, 0.3 * (x * x - 1)));
  }
  return ArcGeometry<double>::from_samples(t, z);
}

void BM_ExteriorMap(benchmark::State& st) {
  const OpenedCurve<double> oc(parabola());
  TheodorsenOptions opt;
  opt.nodes = std::size_t(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(exterior_map_of_opened_curve(oc, opt));
}
BENCHMARK(BM_ExteriorMap)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_BuildSzego(benchmark::State& st) {
  const auto fr = build_frame(parabola(), BasePoint<double>::at(C(0.3, 0.8)));
  const auto f = density_exp_cos<double>(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(build_szego(fr, f, std::size_t(st.range(0))));
}
BENCHMARK(BM_BuildSzego)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Arnoldi(benchmark::State& st) {
  const auto arc = parabola();
  const auto fr = build_frame(arc, BasePoint<double>::inf());
  const auto ip = transplant_quadrature(*fr, make_measure(arc, BasePoint<double>::inf(), density_one<double>(), {}), 4096);
  const std::size_t n = std::size_t(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(orthonormalize(ip, n, arc));
}
BENCHMARK(BM_Arnoldi)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Faber(benchmark::State& st) {
  const auto fr = build_frame(parabola(), BasePoint<double>::inf());
  const AnalyticFunction<double> F = [](const FramePoint<double>& p) { return std::exp(1.0 / p.zeta); };
  const std::size_t n = std::size_t(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(FaberPolynomial<double>(fr, F, n, 1.5));
}
BENCHMARK(BM_Faber)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

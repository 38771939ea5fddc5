#include <hessiso/constructions.hpp>
#include <hessiso/legendre.hpp>
#include <hessiso/norm.hpp>
#include <hessiso/tensors.hpp>

#include <benchmark/benchmark.h>

using namespace hessiso;

namespace {

NormPtr randers(int n) {
  Vec beta = Vec::Zero(n);
  beta(0) = 0.4;
  return make_randers(Mat::Identity(n, n), beta);
}

NormPtr profile3() { return make_profile(1, 3, ProfileFunction::trig({{0.5, 0, 0.04, 0, -0.01}, {}}, Period::Pi)); }

NormPtr expression3() {
  return make_expression(3, Expr::parse("(+ (* 0.5 (+ (pow x1 2) (pow x2 2) (pow x3 2))) (* 0.3 (/ (+ (pow x1 4) "
                                        "(pow x2 4) (pow x3 4)) (+ (pow x1 2) (pow x2 2) (pow x3 2)))))"));
}

Vec point(int n) {
  Vec y(n);
  for (int i = 0; i < n; ++i) y(i) = 0.3 + 0.17 * i;
  return y;
}

void BM_Jet3Randers(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const NormPtr F = randers(n);
  const Vec y = point(n);
  for (auto _ : st) benchmark::DoNotOptimize(jet3(*F, y));
}
BENCHMARK(BM_Jet3Randers)->Arg(3)->Arg(5)->Arg(8);

void BM_Jet3Profile(benchmark::State& st) {
  const NormPtr F = profile3();
  const Vec y = point(3);
  for (auto _ : st) benchmark::DoNotOptimize(jet3(*F, y));
}
BENCHMARK(BM_Jet3Profile);

void BM_Jet3Expression(benchmark::State& st) {
  const NormPtr F = expression3();
  const Vec y = point(3);
  for (auto _ : st) benchmark::DoNotOptimize(jet3(*F, y));
}
BENCHMARK(BM_Jet3Expression);

void BM_CurvatureTensor(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const NormPtr F = randers(n);
  const Vec y = point(n);
  for (auto _ : st) benchmark::DoNotOptimize(curvature_tensor(*F, y));
}
BENCHMARK(BM_CurvatureTensor)->Arg(3)->Arg(5)->Arg(8);

void BM_FdRiemannOracle(benchmark::State& st) {
  const NormPtr F = randers(3);
  const Vec y = point(3);
  for (auto _ : st) benchmark::DoNotOptimize(fd_riemann_oracle(*F, y));
}
BENCHMARK(BM_FdRiemannOracle);

void BM_LegendreInverse(benchmark::State& st) {
  const NormPtr F = profile3();
  const Vec p = legendre_map(*F, point(3));
  for (auto _ : st) benchmark::DoNotOptimize(legendre_inverse(*F, p));
}
BENCHMARK(BM_LegendreInverse);

void BM_PolarChart(benchmark::State& st) {
  const NormPtr F = randers(2);
  for (auto _ : st) benchmark::DoNotOptimize(polar_chart_2d(F));
}
BENCHMARK(BM_PolarChart)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

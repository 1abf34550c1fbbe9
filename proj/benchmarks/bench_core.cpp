#include <benchmark/benchmark.h>

#include "finsler4/conformal.hpp"
#include "finsler4/oracle.hpp"

namespace {

using namespace finsler4;

const SamplePoint kPoint{{0.1, -0.2, 0.3, 0.05}, {0.7, -0.4, 0.9, 0.35}};

MetricSpec randers_x() {
  MetricParams p;
  p.b = std::array<std::string, kDim>{"0.1*x2", "0", "0.05*x1", "0"};
  return make_builtin_metric(Family::Randers, p);
}

void BM_EvalLJet(benchmark::State& st) {
  const MetricSpec spec = randers_x();
  for (auto _ : st) benchmark::DoNotOptimize(eval_L(spec, kPoint.x, kPoint.y, kPointCaps));
}
BENCHMARK(BM_EvalLJet);

void BM_PointGeometry(benchmark::State& st) {
  const MetricSpec spec = randers_x();
  for (auto _ : st) benchmark::DoNotOptimize(PointGeometry::compute(spec, kPoint.x, kPoint.y));
}
BENCHMARK(BM_PointGeometry);

void BM_AnalyzeFrame(benchmark::State& st) {
  const MetricSpec spec = randers_x();
  const PointGeometry geo = PointGeometry::compute(spec, kPoint.x, kPoint.y);
  for (auto _ : st) benchmark::DoNotOptimize(analyze_frame(geo));
}
BENCHMARK(BM_AnalyzeFrame);

void BM_OracleTensors(benchmark::State& st) {
  const MetricSpec spec = randers_x();
  for (auto _ : st) benchmark::DoNotOptimize(oracle_tensors(spec, kPoint.x, kPoint.y));
}
BENCHMARK(BM_OracleTensors);

void BM_ConformalPoint(benchmark::State& st) {
  const MetricSpec lifted = conformal_lift(MetricSpec::quartic_minkowski(), "0.1*x1+0.05*x2^2");
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_conformal_point(lifted, kPoint));
}
BENCHMARK(BM_ConformalPoint);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>

#include "harmap/families.hpp"
#include "harmap/functionals.hpp"
#include "harmap/laplace.hpp"

namespace {

void BM_SolveExpTrace(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const harmap::DomainSpec sq{harmap::Rectangle{0, 1, 0, 1}};
  const auto bd = harmap::BoundaryData::from_trace(sq, res, [](double u, double v) {
    Eigen::VectorXd x(1);
    x << std::exp(u) * std::cos(v);
    return x;
  });
  for (auto _ : state) benchmark::DoNotOptimize(harmap::solve(sq, res, bd, 1e-10));
}
BENCHMARK(BM_SolveExpTrace)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_VerifyCatenoid(benchmark::State& state) {
  const auto fam = harmap::make_family("catenoid");
  const auto field = harmap::sample_grid(fam, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(harmap::verify_theorem1(field, {"catenoid", {}}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(field.samples.size()));
}
BENCHMARK(BM_VerifyCatenoid)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EvaluateFrame(benchmark::State& state) {
  const auto jet = harmap::make_family("enneper").jet_fn(0.3, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(harmap::evaluate_frame(jet, 1.0));
}
BENCHMARK(BM_EvaluateFrame);

}  // namespace

BENCHMARK_MAIN();

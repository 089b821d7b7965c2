// Serial reference kernels against their OpenMP twins.

#include <benchmark/benchmark.h>

#include "adacover/covering.hpp"
#include "adacover/kdtree.hpp"
#include "adacover/kernels.hpp"

using namespace adacover;

namespace {

void count_hits(benchmark::State& state, kernels::Exec exec) {
  const PolytopeH p = PolytopeH::cube(3, 0.5);
  const AxisBox box{Eigen::VectorXd::Constant(3, -1.0), Eigen::VectorXd::Constant(3, 1.0)};
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::count_hits(exec, p, box, n, 7));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void nearest_distance(benchmark::State& state, kernels::Exec exec) {
  Rng rng(3);
  PointSet train(2, state.range(0));
  for (Eigen::Index i = 0; i < train.size(); ++i) sample_unit_ball(2, rng, train[i]);
  const KdTree tree(train);
  const PointSet grid = ball_grid(2, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::max_nearest_distance(exec, tree, grid));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid.size()));
}

void sample_loss(benchmark::State& state, kernels::Exec exec) {
  const DensityModel density = DensityModel::uniform(2);
  const kernels::PointLoss loss = [](const Eigen::Ref<const Eigen::VectorXd>& x) { return x.norm(); };
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sample_loss(exec, density, loss, n, 11).sum);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

}  // namespace

BENCHMARK_CAPTURE(count_hits, serial, kernels::Exec::serial)->Arg(1 << 20);
BENCHMARK_CAPTURE(count_hits, omp, kernels::Exec::parallel)->Arg(1 << 20);
BENCHMARK_CAPTURE(nearest_distance, serial, kernels::Exec::serial)->Arg(3000);
BENCHMARK_CAPTURE(nearest_distance, omp, kernels::Exec::parallel)->Arg(3000);
BENCHMARK_CAPTURE(sample_loss, serial, kernels::Exec::serial)->Arg(1 << 18);
BENCHMARK_CAPTURE(sample_loss, omp, kernels::Exec::parallel)->Arg(1 << 18);

BENCHMARK_MAIN();

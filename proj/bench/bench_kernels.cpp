#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "modp/books.hpp"
#include "modp/kernels.hpp"
#include "modp/network.hpp"
#include "modp/sample.hpp"

using namespace modp;

namespace {

OpenBook y_book() {
  Eigen::MatrixXd spine = Eigen::MatrixXd::Zero(3, 1);
  spine(2, 0) = 1;
  std::vector<Eigen::Vector2d> dirs;
  for (double d : {90.0, 210.0, 330.0}) dirs.push_back({std::cos(d * M_PI / 180), std::sin(d * M_PI / 180)});
  return OpenBook::make(2, 1, spine, OpenBook::default_plane(spine, 3), dirs);
}

const VarifoldSample& book_sample(double delta) {
  static const OpenBook S = y_book();
  static std::map<double, VarifoldSample> cache;
  auto it = cache.find(delta);
  if (it == cache.end()) it = cache.emplace(delta, sample_book(S, {1, 1, 1}, 1.0, delta)).first;
  return it->second;
}

Vec center() {
  Vec q(3);
  q << 0.05, 0.02, 0.1;
  return q;
}

void BM_excess_serial(benchmark::State& state) {
  const VarifoldSample& T = book_sample(1.0 / state.range(0));
  const OpenBook S = rotated_about_spine(y_book(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(excess_serial(T, S, center(), 0.8));
  state.SetItemsProcessed(state.iterations() * T.size());
}

void BM_excess_parallel(benchmark::State& state) {
  const VarifoldSample& T = book_sample(1.0 / state.range(0));
  const OpenBook S = rotated_about_spine(y_book(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(excess(T, S, center(), 0.8));
  state.SetItemsProcessed(state.iterations() * T.size());
}

void BM_ball_mass_serial(benchmark::State& state) {
  const VarifoldSample& T = book_sample(1.0 / state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_sum_serial(T.points, T.weights, center(), 0.8, [](Eigen::Index) { return 1.0; }));
  }
  state.SetItemsProcessed(state.iterations() * T.size());
}

void BM_ball_mass_parallel(benchmark::State& state) {
  const VarifoldSample& T = book_sample(1.0 / state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_sum(T.points, T.weights, center(), 0.8, [](Eigen::Index) { return 1.0; }));
  }
  state.SetItemsProcessed(state.iterations() * T.size());
}

// Topology loop of the network solver; range(0) is the thread cap (0 = all).
void BM_network_topologies(benchmark::State& state) {
  if (state.range(0) > 0) {
    setenv("MODP_THREADS", std::to_string(state.range(0)).c_str(), 1);
  } else {
    unsetenv("MODP_THREADS");
  }
  std::vector<Terminal> t;
  for (int i = 0; i < 5; ++i) {
    const double a = 2 * M_PI * i / 5 + 0.1 * i;
    t.push_back({{std::cos(a), std::sin(a)}, 1});
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_network(t, 5, WeightedMetric{}).mass);
  unsetenv("MODP_THREADS");
}

}  // namespace

BENCHMARK(BM_excess_serial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_excess_parallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ball_mass_serial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ball_mass_parallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_network_topologies)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

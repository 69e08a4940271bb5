#include <benchmark/benchmark.h>

#include <random>

#include "sinkatlas/corpus.hpp"
#include "sinkatlas/dynamics.hpp"
#include "sinkatlas/preference_graph.hpp"
#include "sinkatlas/stability.hpp"

using namespace sinkatlas;

namespace {

Game bench_game(int rows, int cols) {
  return random_game({rows, cols}, RandomGameClass::Generic, 42);
}

void BM_build_graph(benchmark::State& state) {
  Game g = bench_game(static_cast<int>(state.range(0)),
                      static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_graph(g));
  }
}
BENCHMARK(BM_build_graph)->Arg(4)->Arg(8)->Arg(16);

void BM_sink_equilibria(benchmark::State& state) {
  Game g = bench_game(static_cast<int>(state.range(0)),
                      static_cast<int>(state.range(0)));
  PreferenceGraph pg = build_graph(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sink_equilibria(pg, g));
  }
}
BENCHMARK(BM_sink_equilibria)->Arg(4)->Arg(8)->Arg(16);

void BM_product_matrix(benchmark::State& state) {
  Game g = bench_game(static_cast<int>(state.range(0)),
                      static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(product_matrix(g));
  }
}
BENCHMARK(BM_product_matrix)->Arg(4)->Arg(8);

void BM_replicator_field(benchmark::State& state) {
  Game g = random_game({3, 3, 3}, RandomGameClass::Generic, 7);
  MixedProfile x = MixedProfile::barycenter(g.strategy_counts());
  for (auto _ : state) {
    benchmark::DoNotOptimize(replicator_vector_field(g, x));
  }
}
BENCHMARK(BM_replicator_field);

void BM_integrate_1k_steps(benchmark::State& state) {
  NamedGame sh = make_shapley();
  MixedProfile x0({{0.5, 0.3, 0.2}, {0.25, 0.35, 0.4}});
  IntegrateOptions o;
  o.t_max = 1.0;
  o.step = 1e-3;
  o.record_stride = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(sh.game, x0, o));
  }
}
BENCHMARK(BM_integrate_1k_steps);

void BM_pseudoconvexity(benchmark::State& state) {
  NamedGame sh = make_shapley();
  PreferenceGraph pg = build_graph(sh.game);
  auto sinks = sink_equilibria(pg, sh.game);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_pseudoconvex_sink(sh.game, pg, sinks[0]));
  }
}
BENCHMARK(BM_pseudoconvexity);

}  // namespace

BENCHMARK_MAIN();

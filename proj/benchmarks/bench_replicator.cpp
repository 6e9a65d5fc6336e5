#include <benchmark/benchmark.h>

#include "evodyn/dynamics.hpp"
#include "evodyn/forms.hpp"
#include "evodyn/game_tree.hpp"
#include "evodyn/stability.hpp"

namespace {

using namespace evodyn;

struct Fixture {
  GameTree g;
  SequenceForm sf;
  PlanSet p1, p2;
  NormalForm nf;
  SequenceStrategy x1, x2;
  NormalStrategy pi1, pi2;

  explicit Fixture(int units) {
    g = bench_family_game(units, 2, 11);
    sf = build_sequence_form(g);
    p1 = enumerate_plans(g, 0);
    p2 = enumerate_plans(g, 1);
    nf = build_normal_form(g, p1, p2);
    BehavioralStrategy s1 = random_behavioral(g, 0, 21, 0.05);
    BehavioralStrategy s2 = random_behavioral(g, 1, 22, 0.05);
    x1 = behavioral_to_sequence(s1, sf);
    x2 = behavioral_to_sequence(s2, sf);
    pi1 = behavioral_to_normal(s1, p1);
    pi2 = behavioral_to_normal(s2, p2);
  }
};

void bm_discrete_step_sequence(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_step_sequence(f.sf, f.x1, f.x2));
  state.counters["seqs1"] = f.sf.num_seqs(0);
}

void bm_discrete_step_normal(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_step_normal(f.nf, f.pi1, f.pi2));
  state.counters["plans1"] = static_cast<double>(f.p1.plans.size());
}

void bm_continuous_rhs_sequence(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(continuous_rhs_sequence(f.sf, f.x1, f.x2));
}

void bm_jacobian(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(f.sf, f.x1, f.x2));
}

}  // namespace

BENCHMARK(bm_discrete_step_sequence)->Arg(2)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(bm_discrete_step_normal)->Arg(2)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(bm_continuous_rhs_sequence)->Arg(2)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(bm_jacobian)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();

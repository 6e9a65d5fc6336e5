#include "evodyn/benchmark.hpp"

#include <algorithm>
#include <chrono>

#include "evodyn/dynamics.hpp"
#include "evodyn/forms.hpp"
#include "evodyn/game_tree.hpp"

namespace evodyn {

namespace {

double median_ns(std::vector<double>& samples) {
  std::sort(samples.begin(), samples.end());
  std::size_t n = samples.size();
  return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

template <class F>
double time_ns(int reps, F&& step) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    step();
    auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  return median_ns(samples);
}

}  // namespace

std::vector<BenchRow> run_size_benchmark(const std::vector<int>& unit_counts, int branching,
                                         int reps, unsigned seed) {
  std::vector<BenchRow> rows;
  for (int units : unit_counts) {
    GameTree g = bench_family_game(units, branching, seed);
    SequenceForm sf = build_sequence_form(g);
    PlanSet p1 = enumerate_plans(g, 0);
    PlanSet p2 = enumerate_plans(g, 1);
    NormalForm nf = reduce_normal_form(g, p1, p2);

    BehavioralStrategy s1 = random_behavioral(g, 0, seed + 1, 0.05);
    BehavioralStrategy s2 = random_behavioral(g, 1, seed + 2, 0.05);
    SequenceStrategy x1 = behavioral_to_sequence(s1, sf);
    SequenceStrategy x2 = behavioral_to_sequence(s2, sf);
    NormalStrategy pi1 = behavioral_to_normal(s1, nf.plans[0]);
    NormalStrategy pi2 = behavioral_to_normal(s2, nf.plans[1]);

    BenchRow row;
    row.units = units;
    row.num_seqs1 = sf.num_seqs(0);
    row.num_seqs2 = sf.num_seqs(1);
    row.num_plans1 = static_cast<int>(nf.plans[0].plans.size());
    row.num_plans2 = static_cast<int>(nf.plans[1].plans.size());
    row.seq_step_ns = time_ns(reps, [&] { discrete_step_sequence(sf, x1, x2); });
    row.normal_step_ns = time_ns(reps, [&] { discrete_step_normal(nf, pi1, pi2); });
    rows.push_back(row);
  }
  return rows;
}

}  // namespace evodyn

#pragma once

#include <vector>

namespace evodyn {

struct BenchRow {
  int units = 0;
  int num_seqs1 = 0;
  int num_seqs2 = 0;
  int num_plans1 = 0;
  int num_plans2 = 0;
  double seq_step_ns = 0.0;
  double normal_step_ns = 0.0;
};

// Times one discrete replicator step in both representations on the scaling
// game family, median over `reps` repetitions.
std::vector<BenchRow> run_size_benchmark(const std::vector<int>& unit_counts, int branching,
                                         int reps, unsigned seed = 7);

}  // namespace evodyn

#pragma once

#include <array>
#include <complex>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "evodyn/dynamics.hpp"
#include "evodyn/forms.hpp"

namespace evodyn {

enum class GEntryKind { zero, subsequence_one, ratio, best_response_one };

struct CompletedGVector {
  std::vector<double> value;
  std::vector<GEntryKind> kind;
  std::vector<int> ratio_base;                  // denominator sequence for ratio entries, else -1
  std::vector<std::pair<int, int>> tiebreaks;   // (infoset id, chosen extension sequence)
};

// Per-infoset forced best-response choice (infoset id -> extension sequence),
// used to exercise tie-break alternatives.
using TieBreakMap = std::map<int, int>;

// Best-response continuation values of one agent against a fixed opponent
// strategy: value(q) = direct payoff of q plus the best extension value at
// every infoset hanging off q, bottom-up.
struct BestResponseInfo {
  std::vector<double> seq_value;
  std::map<int, int> chosen;               // infoset id -> argmax extension (lowest index on ties)
  std::map<int, std::vector<int>> tied;    // extensions within tie tolerance of the max
};

BestResponseInfo best_response_info(const SequenceForm& sf, int agent,
                                    const std::vector<double>& opp, double tie_tol = 1e-9,
                                    const TieBreakMap* forced = nullptr);

// Algorithm-1 vector completed at zero-probability branch points: the
// best-response extension path gets 1, its tied alternatives 0.
CompletedGVector g_vector_completed(const SequenceForm& sf, const SequenceStrategy& x,
                                    const SequenceStrategy& x_opp, int q,
                                    const TieBreakMap* forced = nullptr);

// Ambient-coordinate Jacobian of the continuous-time sequence replicator,
// side |Q_1| + |Q_2|, assembled from the completed g vectors. Constant g
// entries (0/1, including best-response ones) have zero derivative; a ratio
// x(s)/x(c) differentiates to 1/x(c) in s and -x(s)/x(c)^2 in c.
DenseMatrix jacobian(const SequenceForm& sf, const SequenceStrategy& x1,
                     const SequenceStrategy& x2,
                     const std::array<TieBreakMap, 2>* forced = nullptr);

enum class StabilityClass { asymptotically_stable, unstable, inconclusive };

struct StabilityReport {
  DenseMatrix jac;
  std::vector<std::complex<double>> eigenvalues;  // sorted by real part desc, then imag desc
  StabilityClass classification = StabilityClass::inconclusive;
  // (agent, infoset id, chosen extension sequence) per completed infoset.
  std::vector<std::tuple<int, int, int>> tiebreaks;
};

StabilityReport classify_stability(const DenseMatrix& jac, double tol = 1e-9);

StabilityReport analyze_stability(const SequenceForm& sf, const SequenceStrategy& x1,
                                  const SequenceStrategy& x2, double tol = 1e-9);

// Infosets of `agent` with zero-probability parent sequence and two or more
// tied best-response extensions under x_opp.
std::vector<std::pair<int, std::vector<int>>> completion_ties(const SequenceForm& sf,
                                                              const SequenceStrategy& x,
                                                              const SequenceStrategy& x_opp,
                                                              double tie_tol = 1e-9);

const char* to_string(StabilityClass c);

}  // namespace evodyn

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "evodyn/game_tree.hpp"
#include "evodyn/numerics.hpp"

namespace evodyn {

inline constexpr long long kDefaultPlanCap = 1'000'000;

// One action per infoset; -1 marks a don't-care (unreachable) infoset of a
// reduced plan.
struct Plan {
  std::vector<int> choice;
};

// Plans of one agent over their infosets sorted by global infoset index.
// Enumeration order is lexicographic: first infoset most significant, actions
// in their declared order.
struct PlanSet {
  int agent = 0;
  std::vector<int> infosets;                      // global ids, ascending
  std::vector<std::vector<std::string>> actions;  // labels per infoset
  std::vector<Plan> plans;

  int infoset_pos(int infoset) const;  // -1 if the agent does not own it
  std::string label(const Plan& p) const;
  std::string label(std::size_t index) const { return label(plans[index]); }
  int find(const std::string& lbl) const;  // -1 if absent
};

PlanSet enumerate_plans(const GameTree& g, int agent, long long cap = kDefaultPlanCap);

struct NormalForm {
  std::array<PlanSet, 2> plans;
  DenseMatrix u1;  // |P1| x |P2|
  DenseMatrix u2;
};

NormalForm build_normal_form(const GameTree& g, const PlanSet& p1, const PlanSet& p2);

// Merges plans with identical terminal-reach rows against every opponent
// plan (equivalently: identical choices on their self-reachable infosets).
NormalForm reduce_normal_form(const GameTree& g, const PlanSet& p1, const PlanSet& p2);

// --- Sequence form ---------------------------------------------------------

struct SequenceInfo {
  int parent = -1;      // sequence id; -1 only for the empty sequence
  int infoset = -1;     // infoset of the last action; -1 for the empty sequence
  int action = -1;      // index into that infoset's action list
  int depth = 0;        // number of own actions
  std::string label;    // concatenated action labels, "" for the empty sequence
};

struct InfosetExtension {
  int infoset = -1;            // global infoset id
  int agent = 0;
  int parent_seq = 0;          // sequence leading to this infoset
  std::vector<int> ext;        // ext[a] = sequence id of parent_seq|a
  std::vector<int> nodes;      // member decision nodes
};

struct SequenceForm {
  const GameTree* game = nullptr;
  std::array<std::vector<SequenceInfo>, 2> seqs;  // empty sequence first, then DFS discovery order
  std::vector<InfosetExtension> infosets;         // discovery order, both agents
  std::array<std::vector<int>, 2> agent_infosets; // indices into `infosets`
  std::map<int, int> infoset_index;               // global infoset id -> index into `infosets`
  std::array<SparseBilinear, 2> payoff;           // u[i]: rows Q_1, cols Q_2, values for agent i
  std::vector<int> terminals;                     // terminal node ids, preorder
  std::vector<std::array<int, 2>> terminal_seq;   // (q1, q2) per terminal

  int num_seqs(int agent) const { return static_cast<int>(seqs[static_cast<std::size_t>(agent)].size()); }
  int find(int agent, const std::string& label) const;  // -1 if absent
  // True when sequence `prefix` is a subsequence of `q` (both of `agent`).
  bool is_prefix(int agent, int prefix, int q) const;
  // Deepest common subsequence of a and b.
  int common_prefix(int agent, int a, int b) const;
  // True when q takes an action at infoset h.
  bool crosses(int agent, int q, int infoset) const;
};

SequenceForm build_sequence_form(const GameTree& g);

// --- Strategies -------------------------------------------------------------

struct SequenceStrategy {
  int agent = 0;
  std::vector<double> x;  // aligned with SequenceForm ordering
};

struct NormalStrategy {
  int agent = 0;
  std::vector<double> pi;  // aligned with a PlanSet
};

struct BehavioralStrategy {
  int agent = 0;
  std::vector<int> infosets;                 // global ids, ascending
  std::vector<std::vector<double>> sigma;    // per infoset, per action

  int infoset_pos(int infoset) const;
};

ValidationReport check_sequence_constraints(const SequenceForm& sf, const SequenceStrategy& x,
                                            double tol = 1e-9);

BehavioralStrategy uniform_behavioral(const GameTree& g, int agent);
// Behavioral sampled per infoset from a seeded generator; `mixed_floor` > 0
// keeps every action probability at or above it.
BehavioralStrategy random_behavioral(const GameTree& g, int agent, std::uint64_t seed,
                                     double mixed_floor = 0.0);

NormalStrategy behavioral_to_normal(const BehavioralStrategy& sigma, const PlanSet& plans);
SequenceStrategy behavioral_to_sequence(const BehavioralStrategy& sigma, const SequenceForm& sf);
// Per-infoset marginals of the plan mixture, renormalized; uniform at
// infosets carrying no mass.
BehavioralStrategy normal_to_behavioral(const NormalStrategy& pi, const PlanSet& plans);
// Valid for reduced plans: x(q|a) is the mass of plans choosing a.
SequenceStrategy reduced_normal_to_sequence(const NormalStrategy& pi, const PlanSet& plans,
                                            const SequenceForm& sf);
// Valid for full and reduced plans alike: x(q) sums plans consistent with
// every action of q.
SequenceStrategy normal_to_sequence(const NormalStrategy& pi, const PlanSet& plans,
                                    const SequenceForm& sf);
// Conditional ratios x(q|a)/x(q); uniform below unreached sequences.
BehavioralStrategy sequence_to_behavioral(const SequenceStrategy& x, const SequenceForm& sf);

// Probability of reaching each terminal (aligned with sf.terminals).
std::vector<double> realization_probabilities(const SequenceForm& sf, const SequenceStrategy& x1,
                                              const SequenceStrategy& x2);
std::vector<double> realization_probabilities(const SequenceForm& sf, const PlanSet& p1,
                                              const NormalStrategy& pi1, const PlanSet& p2,
                                              const NormalStrategy& pi2);
std::vector<double> realization_probabilities(const SequenceForm& sf,
                                              const BehavioralStrategy& s1,
                                              const BehavioralStrategy& s2);

struct EquivalenceResult {
  bool equivalent = false;
  double max_discrepancy = 0.0;
};

EquivalenceResult is_realization_equivalent(const std::vector<double>& reach_a,
                                            const std::vector<double>& reach_b, double tol);

}  // namespace evodyn

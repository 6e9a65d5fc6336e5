#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace evodyn {

enum class NodeKind { decision, terminal };

struct GameNode {
  NodeKind kind = NodeKind::terminal;
  std::string name;
  int agent = -1;                    // 0 or 1, decision nodes only
  int infoset = -1;                  // globally unique infoset index
  std::vector<std::string> actions;  // ordered action labels
  std::vector<int> children;         // child node per action
  std::array<double, 2> payoffs{0.0, 0.0};
};

// Two-agent imperfect-information game tree. Immutable after construction;
// all derived representations keep a pointer to it.
struct GameTree {
  std::array<std::string, 2> players{"1", "2"};
  int root = 0;
  std::vector<GameNode> nodes;

  const GameNode& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks tree structure, infoset consistency (same owner, same ordered
// action labels) and perfect recall (identical own-action histories within
// each infoset). Violations are data, not faults.
ValidationReport validate_game(const GameTree& g);

// The four-infoset example game used throughout the tests: agent 1 picks
// L1/R1, after R1 agent 2 picks l/r, then agent 1 moves again at 1.2 or 1.3.
GameTree build_example_game();

struct RandomGameSpec {
  int depth = 2;
  int branching = 2;
  double merge_prob = 0.0;
  double payoff_min = 0.0;
  double payoff_max = 10.0;
  std::uint64_t seed = 0;
  long long plan_cap = 1'000'000;
};

// Deterministic generator: complete `branching`-ary tree of the given depth,
// owners alternating by level starting with agent 1. Infoset merges are only
// attempted between nodes with identical own-action histories, so the result
// always has perfect recall. Throws std::invalid_argument when either
// agent's full plan count would exceed spec.plan_cap.
GameTree random_game(const RandomGameSpec& spec);

// Size-benchmark family: the root is an agent-2 node with `units` actions,
// each leading to a singleton agent-1 infoset with `branching` actions to
// terminals. Sequence counts grow linearly in `units` while agent 1's
// reduced plan count is branching^units. Payoffs are seeded uniform in [1, 2].
GameTree bench_family_game(int units, int branching, std::uint64_t seed);

// Ordered (infoset, action index) pairs of `agent` along the root path to `node`.
std::vector<std::pair<int, int>> own_action_history(const GameTree& g, int node, int agent);

std::vector<int> terminal_nodes(const GameTree& g);  // depth-first preorder
std::vector<int> parent_of(const GameTree& g);       // -1 for root / unreachable

long long full_plan_count(const GameTree& g, int agent);  // -1 on overflow

}  // namespace evodyn

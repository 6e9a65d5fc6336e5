#include "evodyn/game_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace evodyn {

namespace {

std::string node_label(const GameTree& g, int id) {
  const GameNode& n = g.node(id);
  return n.name.empty() ? "#" + std::to_string(id) : n.name;
}

}  // namespace

std::vector<int> parent_of(const GameTree& g) {
  std::vector<int> parent(g.nodes.size(), -1);
  for (int id = 0; id < g.num_nodes(); ++id) {
    const GameNode& n = g.node(id);
    if (n.kind != NodeKind::decision) continue;
    for (int c : n.children) {
      if (c >= 0 && c < g.num_nodes() && parent[static_cast<std::size_t>(c)] == -1 && c != g.root)
        parent[static_cast<std::size_t>(c)] = id;
    }
  }
  return parent;
}

std::vector<std::pair<int, int>> own_action_history(const GameTree& g, int node, int agent) {
  std::vector<int> parent = parent_of(g);
  std::vector<std::pair<int, int>> rev;
  int cur = node;
  while (cur != g.root) {
    int p = parent[static_cast<std::size_t>(cur)];
    if (p < 0) break;  // unreachable node, caller validates separately
    const GameNode& pn = g.node(p);
    int ai = -1;
    for (std::size_t k = 0; k < pn.children.size(); ++k)
      if (pn.children[k] == cur) ai = static_cast<int>(k);
    if (pn.agent == agent) rev.emplace_back(pn.infoset, ai);
    cur = p;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

std::vector<int> terminal_nodes(const GameTree& g) {
  std::vector<int> out;
  std::vector<int> stack{g.root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const GameNode& n = g.node(id);
    if (n.kind == NodeKind::terminal) {
      out.push_back(id);
    } else {
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

long long full_plan_count(const GameTree& g, int agent) {
  std::map<int, std::size_t> infoset_actions;
  for (const GameNode& n : g.nodes)
    if (n.kind == NodeKind::decision && n.agent == agent)
      infoset_actions[n.infoset] = n.actions.size();
  long long count = 1;
  for (const auto& [h, na] : infoset_actions) {
    if (count > (1LL << 62) / static_cast<long long>(na)) return -1;
    count *= static_cast<long long>(na);
  }
  return count;
}

ValidationReport validate_game(const GameTree& g) {
  ValidationReport rep;
  auto flag = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  if (g.nodes.empty()) {
    flag("empty node set");
    return rep;
  }
  if (g.root < 0 || g.root >= g.num_nodes()) {
    flag("root index out of range");
    return rep;
  }
  if (g.players[0].empty() || g.players[1].empty() || g.players[0] == g.players[1])
    flag("game must name exactly two distinct agents");
  if (g.node(g.root).kind == NodeKind::terminal)
    flag("no decision nodes: root is terminal");

  bool structure_ok = true;
  for (int id = 0; id < g.num_nodes(); ++id) {
    const GameNode& n = g.node(id);
    if (n.kind != NodeKind::decision) continue;
    if (n.agent != 0 && n.agent != 1) {
      flag("node " + node_label(g, id) + ": agent out of range (chance nodes are not supported)");
      structure_ok = false;
    }
    if (n.actions.empty()) {
      flag("node " + node_label(g, id) + ": empty action list");
      structure_ok = false;
    }
    if (n.actions.size() != n.children.size()) {
      flag("node " + node_label(g, id) + ": action/child count mismatch");
      structure_ok = false;
    }
    std::set<std::string> labels(n.actions.begin(), n.actions.end());
    if (labels.size() != n.actions.size())
      flag("node " + node_label(g, id) + ": duplicate action labels");
    for (int c : n.children)
      if (c < 0 || c >= g.num_nodes()) {
        flag("node " + node_label(g, id) + ": child index out of range");
        structure_ok = false;
      }
  }
  if (!structure_ok) return rep;

  // Tree check: unique parent, root unreferenced, every node reachable.
  std::vector<int> indegree(g.nodes.size(), 0);
  for (const GameNode& n : g.nodes)
    if (n.kind == NodeKind::decision)
      for (int c : n.children) ++indegree[static_cast<std::size_t>(c)];
  if (indegree[static_cast<std::size_t>(g.root)] != 0)
    flag("root has an incoming edge");
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<int> stack{g.root};
  seen[static_cast<std::size_t>(g.root)] = 1;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const GameNode& n = g.node(id);
    if (n.kind != NodeKind::decision) continue;
    for (int c : n.children) {
      if (seen[static_cast<std::size_t>(c)]) {
        flag("node " + node_label(g, c) + ": reached by more than one path (not a tree)");
        return rep;
      }
      seen[static_cast<std::size_t>(c)] = 1;
      stack.push_back(c);
    }
  }
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!seen[static_cast<std::size_t>(id)]) {
      flag("node " + node_label(g, id) + ": unreachable from root");
      if (indegree[static_cast<std::size_t>(id)] > 1)
        flag("node " + node_label(g, id) + ": more than one parent");
    }
  }
  if (!rep.ok()) return rep;

  // Infoset consistency and perfect recall.
  std::map<int, std::vector<int>> members;
  for (int id = 0; id < g.num_nodes(); ++id)
    if (g.node(id).kind == NodeKind::decision) members[g.node(id).infoset].push_back(id);
  for (const auto& [h, nodes] : members) {
    const GameNode& first = g.node(nodes.front());
    for (int id : nodes) {
      const GameNode& n = g.node(id);
      if (n.agent != first.agent)
        flag("infoset " + std::to_string(h) + ": nodes owned by different agents");
      if (n.actions != first.actions)
        flag("infoset " + std::to_string(h) + ": node " + node_label(g, id) +
             " has a different ordered action list");
    }
    auto hist0 = own_action_history(g, nodes.front(), first.agent);
    for (std::size_t k = 1; k < nodes.size(); ++k) {
      if (own_action_history(g, nodes[k], first.agent) != hist0)
        flag("infoset " + std::to_string(h) + ": perfect recall violated at node " +
             node_label(g, nodes[k]));
    }
  }
  return rep;
}

GameTree build_example_game() {
  GameTree g;
  g.players = {"1", "2"};
  g.nodes.resize(9);
  // 0: node 1.1, children 1 (terminal after L1) and 2 (node 2.1)
  g.nodes[0] = {NodeKind::decision, "1.1", 0, 0, {"L1", "R1"}, {1, 2}, {}};
  g.nodes[1] = {NodeKind::terminal, "t_L1", -1, -1, {}, {}, {2.0, 4.0}};
  g.nodes[2] = {NodeKind::decision, "2.1", 1, 1, {"l", "r"}, {3, 4}, {}};
  g.nodes[3] = {NodeKind::decision, "1.2", 0, 2, {"L2", "R2"}, {5, 6}, {}};
  g.nodes[4] = {NodeKind::decision, "1.3", 0, 3, {"L3", "R3"}, {7, 8}, {}};
  g.nodes[5] = {NodeKind::terminal, "t_L2", -1, -1, {}, {}, {3.0, 1.0}};
  g.nodes[6] = {NodeKind::terminal, "t_R2", -1, -1, {}, {}, {3.0, 3.0}};
  g.nodes[7] = {NodeKind::terminal, "t_L3", -1, -1, {}, {}, {2.0, 1.0}};
  g.nodes[8] = {NodeKind::terminal, "t_R3", -1, -1, {}, {}, {4.0, 2.0}};
  g.root = 0;
  return g;
}

GameTree random_game(const RandomGameSpec& spec) {
  if (spec.depth < 1) throw std::invalid_argument("random_game: depth must be >= 1");
  if (spec.branching < 2) throw std::invalid_argument("random_game: branching must be >= 2");
  if (!(spec.payoff_min <= spec.payoff_max))
    throw std::invalid_argument("random_game: empty payoff range");

  // Implied full plan count per agent before merges: branching^(own infosets),
  // every decision node its own infoset in the worst case.
  for (int agent = 0; agent < 2; ++agent) {
    long long infosets = 0;
    long long level_nodes = 1;
    for (int d = 0; d < spec.depth; ++d) {
      if (d % 2 == agent) infosets += level_nodes;
      if (level_nodes > (1LL << 40)) throw std::invalid_argument("random_game: tree too large");
      level_nodes *= spec.branching;
    }
    double plans = static_cast<double>(infosets) * std::log2(static_cast<double>(spec.branching));
    if (plans > std::log2(static_cast<double>(spec.plan_cap)))
      throw std::invalid_argument("random_game: implied plan count exceeds cap");
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> payoff(spec.payoff_min, spec.payoff_max);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  GameTree g;
  g.players = {"1", "2"};
  g.root = 0;
  int next_infoset = 0;
  // Infosets available for merging, keyed by (agent, own-action history).
  std::map<std::pair<int, std::vector<std::pair<int, int>>>, std::vector<int>> mergeable;
  std::map<int, std::vector<std::string>> infoset_labels;

  struct Pending {
    int id;
    int depth;
    std::vector<std::pair<int, int>> hist0;  // agent-0 own-action history
    std::vector<std::pair<int, int>> hist1;
  };
  g.nodes.push_back({});
  std::vector<Pending> queue{{0, 0, {}, {}}};
  // Breadth-first so ancestors' infosets are fixed before descendants are keyed.
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Pending cur = queue[qi];
    GameNode& n = g.nodes[static_cast<std::size_t>(cur.id)];
    n.name = "n" + std::to_string(cur.id);
    if (cur.depth == spec.depth) {
      n.kind = NodeKind::terminal;
      n.payoffs = {payoff(rng), payoff(rng)};
      continue;
    }
    n.kind = NodeKind::decision;
    n.agent = cur.depth % 2;
    const auto& own_hist = (n.agent == 0) ? cur.hist0 : cur.hist1;
    auto key = std::make_pair(n.agent, own_hist);
    int h = -1;
    auto it = mergeable.find(key);
    if (it != mergeable.end() && !it->second.empty() && coin(rng) < spec.merge_prob) {
      std::uniform_int_distribution<std::size_t> pick(0, it->second.size() - 1);
      h = it->second[pick(rng)];
      n.actions = infoset_labels[h];
    } else {
      h = next_infoset++;
      for (int a = 0; a < spec.branching; ++a)
        n.actions.push_back("a" + std::to_string(h) + "_" + std::to_string(a));
      infoset_labels[h] = n.actions;
      mergeable[key].push_back(h);
    }
    n.infoset = h;
    int agent = n.agent;
    for (int a = 0; a < spec.branching; ++a) {
      int child = static_cast<int>(g.nodes.size());
      g.nodes.push_back({});
      g.nodes[static_cast<std::size_t>(cur.id)].children.push_back(child);
      Pending next{child, cur.depth + 1, cur.hist0, cur.hist1};
      if (agent == 0)
        next.hist0.emplace_back(h, a);
      else
        next.hist1.emplace_back(h, a);
      queue.push_back(std::move(next));
    }
  }
  return g;
}

GameTree bench_family_game(int units, int branching, std::uint64_t seed) {
  if (units < 1 || branching < 2)
    throw std::invalid_argument("bench_family_game: units >= 1 and branching >= 2 required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> payoff(1.0, 2.0);
  GameTree g;
  g.players = {"1", "2"};
  g.root = 0;
  GameNode root;
  root.kind = NodeKind::decision;
  root.name = "root";
  root.agent = 1;
  root.infoset = 0;
  g.nodes.push_back(root);
  for (int u = 0; u < units; ++u) {
    g.nodes[0].actions.push_back("b" + std::to_string(u));
    int dec = static_cast<int>(g.nodes.size());
    g.nodes[0].children.push_back(dec);
    GameNode d;
    d.kind = NodeKind::decision;
    d.name = "u" + std::to_string(u);
    d.agent = 0;
    d.infoset = 1 + u;
    g.nodes.push_back(d);
    for (int a = 0; a < branching; ++a) {
      g.nodes[static_cast<std::size_t>(dec)].actions.push_back("c" + std::to_string(u) + "_" +
                                                               std::to_string(a));
      int t = static_cast<int>(g.nodes.size());
      g.nodes[static_cast<std::size_t>(dec)].children.push_back(t);
      GameNode term;
      term.kind = NodeKind::terminal;
      term.name = "t" + std::to_string(u) + "_" + std::to_string(a);
      term.payoffs = {payoff(rng), payoff(rng)};
      g.nodes.push_back(term);
    }
  }
  return g;
}

}  // namespace evodyn

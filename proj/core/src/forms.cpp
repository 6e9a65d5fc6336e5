#include "evodyn/forms.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <stdexcept>

namespace evodyn {

namespace {

// Agent's infosets sorted ascending by global id, with their action labels.
std::vector<std::pair<int, std::vector<std::string>>> agent_infoset_table(const GameTree& g,
                                                                          int agent) {
  std::map<int, std::vector<std::string>> table;
  for (const GameNode& n : g.nodes)
    if (n.kind == NodeKind::decision && n.agent == agent) table[n.infoset] = n.actions;
  return {table.begin(), table.end()};
}

}  // namespace

int PlanSet::infoset_pos(int infoset) const {
  auto it = std::lower_bound(infosets.begin(), infosets.end(), infoset);
  if (it == infosets.end() || *it != infoset) return -1;
  return static_cast<int>(it - infosets.begin());
}

std::string PlanSet::label(const Plan& p) const {
  std::string out;
  bool dont_care = false;
  for (std::size_t k = 0; k < p.choice.size(); ++k) {
    if (p.choice[k] < 0)
      dont_care = true;
    else
      out += actions[k][static_cast<std::size_t>(p.choice[k])];
  }
  if (dont_care) out += "*";
  return out;
}

int PlanSet::find(const std::string& lbl) const {
  for (std::size_t i = 0; i < plans.size(); ++i)
    if (label(plans[i]) == lbl) return static_cast<int>(i);
  return -1;
}

int BehavioralStrategy::infoset_pos(int infoset) const {
  auto it = std::lower_bound(infosets.begin(), infosets.end(), infoset);
  if (it == infosets.end() || *it != infoset) return -1;
  return static_cast<int>(it - infosets.begin());
}

PlanSet enumerate_plans(const GameTree& g, int agent, long long cap) {
  PlanSet ps;
  ps.agent = agent;
  for (const auto& [h, labels] : agent_infoset_table(g, agent)) {
    ps.infosets.push_back(h);
    ps.actions.push_back(labels);
  }
  long long count = 1;
  for (const auto& labels : ps.actions) {
    count *= static_cast<long long>(labels.size());
    if (count > cap) throw std::invalid_argument("enumerate_plans: plan count exceeds cap");
  }
  Plan cur;
  cur.choice.assign(ps.infosets.size(), 0);
  for (long long i = 0; i < count; ++i) {
    ps.plans.push_back(cur);
    for (int k = static_cast<int>(cur.choice.size()) - 1; k >= 0; --k) {
      auto idx = static_cast<std::size_t>(k);
      if (++cur.choice[idx] < static_cast<int>(ps.actions[idx].size())) break;
      cur.choice[idx] = 0;
    }
  }
  return ps;
}

namespace {

// Terminal reached when both agents follow their plans from the root.
int plan_outcome(const GameTree& g, const PlanSet& p1, const Plan& a, const PlanSet& p2,
                 const Plan& b) {
  int cur = g.root;
  while (g.node(cur).kind == NodeKind::decision) {
    const GameNode& n = g.node(cur);
    const PlanSet& ps = (n.agent == 0) ? p1 : p2;
    const Plan& plan = (n.agent == 0) ? a : b;
    int pos = ps.infoset_pos(n.infoset);
    int choice = plan.choice[static_cast<std::size_t>(pos)];
    if (choice < 0) throw std::logic_error("plan_outcome: plan queried at a don't-care infoset");
    cur = n.children[static_cast<std::size_t>(choice)];
  }
  return cur;
}

// Infosets of ps.agent reachable when the agent follows `plan` and the
// opponent plays anything.
std::vector<char> self_reachable(const GameTree& g, const PlanSet& ps, const Plan& plan) {
  std::vector<char> reach(ps.infosets.size(), 0);
  std::vector<int> stack{g.root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const GameNode& n = g.node(id);
    if (n.kind != NodeKind::decision) continue;
    if (n.agent == ps.agent) {
      int pos = ps.infoset_pos(n.infoset);
      reach[static_cast<std::size_t>(pos)] = 1;
      int choice = plan.choice[static_cast<std::size_t>(pos)];
      if (choice >= 0) stack.push_back(n.children[static_cast<std::size_t>(choice)]);
    } else {
      for (int c : n.children) stack.push_back(c);
    }
  }
  return reach;
}

PlanSet reduce_plan_set(const GameTree& g, const PlanSet& full) {
  PlanSet out;
  out.agent = full.agent;
  out.infosets = full.infosets;
  out.actions = full.actions;
  std::map<std::vector<int>, int> seen;
  for (const Plan& p : full.plans) {
    std::vector<char> reach = self_reachable(g, full, p);
    std::vector<int> key(p.choice.size(), -1);
    for (std::size_t k = 0; k < p.choice.size(); ++k)
      if (reach[k]) key[k] = p.choice[k];
    if (seen.emplace(key, static_cast<int>(out.plans.size())).second)
      out.plans.push_back(Plan{key});
  }
  return out;
}

}  // namespace

NormalForm build_normal_form(const GameTree& g, const PlanSet& p1, const PlanSet& p2) {
  NormalForm nf;
  nf.plans = {p1, p2};
  const int n1 = static_cast<int>(p1.plans.size());
  const int n2 = static_cast<int>(p2.plans.size());
  nf.u1 = DenseMatrix(n1, n2);
  nf.u2 = DenseMatrix(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      int t = plan_outcome(g, p1, p1.plans[static_cast<std::size_t>(i)], p2,
                           p2.plans[static_cast<std::size_t>(j)]);
      nf.u1(i, j) = g.node(t).payoffs[0];
      nf.u2(i, j) = g.node(t).payoffs[1];
    }
  return nf;
}

NormalForm reduce_normal_form(const GameTree& g, const PlanSet& p1, const PlanSet& p2) {
  return build_normal_form(g, reduce_plan_set(g, p1), reduce_plan_set(g, p2));
}

// --- Sequence form ---------------------------------------------------------

int SequenceForm::find(int agent, const std::string& label) const {
  const auto& list = seqs[static_cast<std::size_t>(agent)];
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].label == label) return static_cast<int>(i);
  return -1;
}

bool SequenceForm::is_prefix(int agent, int prefix, int q) const {
  const auto& list = seqs[static_cast<std::size_t>(agent)];
  while (list[static_cast<std::size_t>(q)].depth > list[static_cast<std::size_t>(prefix)].depth)
    q = list[static_cast<std::size_t>(q)].parent;
  return q == prefix;
}

int SequenceForm::common_prefix(int agent, int a, int b) const {
  const auto& list = seqs[static_cast<std::size_t>(agent)];
  while (list[static_cast<std::size_t>(a)].depth > list[static_cast<std::size_t>(b)].depth)
    a = list[static_cast<std::size_t>(a)].parent;
  while (list[static_cast<std::size_t>(b)].depth > list[static_cast<std::size_t>(a)].depth)
    b = list[static_cast<std::size_t>(b)].parent;
  while (a != b) {
    a = list[static_cast<std::size_t>(a)].parent;
    b = list[static_cast<std::size_t>(b)].parent;
  }
  return a;
}

bool SequenceForm::crosses(int agent, int q, int infoset) const {
  const auto& list = seqs[static_cast<std::size_t>(agent)];
  while (q > 0) {
    if (list[static_cast<std::size_t>(q)].infoset == infoset) return true;
    q = list[static_cast<std::size_t>(q)].parent;
  }
  return false;
}

SequenceForm build_sequence_form(const GameTree& g) {
  SequenceForm sf;
  sf.game = &g;
  for (int i = 0; i < 2; ++i) sf.seqs[static_cast<std::size_t>(i)].push_back(SequenceInfo{});

  struct Frame {
    int node;
    std::array<int, 2> seq;  // current sequence per agent
  };
  std::vector<Frame> stack{{g.root, {0, 0}}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const GameNode& n = g.node(f.node);
    if (n.kind == NodeKind::terminal) {
      sf.terminals.push_back(f.node);
      sf.terminal_seq.push_back({f.seq[0], f.seq[1]});
      continue;
    }
    const int agent = n.agent;
    auto& seqs = sf.seqs[static_cast<std::size_t>(agent)];
    auto it = sf.infoset_index.find(n.infoset);
    int idx;
    if (it == sf.infoset_index.end()) {
      idx = static_cast<int>(sf.infosets.size());
      sf.infoset_index[n.infoset] = idx;
      InfosetExtension ext;
      ext.infoset = n.infoset;
      ext.agent = agent;
      ext.parent_seq = f.seq[static_cast<std::size_t>(agent)];
      for (std::size_t a = 0; a < n.actions.size(); ++a) {
        SequenceInfo si;
        si.parent = ext.parent_seq;
        si.infoset = n.infoset;
        si.action = static_cast<int>(a);
        si.depth = seqs[static_cast<std::size_t>(ext.parent_seq)].depth + 1;
        si.label = seqs[static_cast<std::size_t>(ext.parent_seq)].label + n.actions[a];
        ext.ext.push_back(static_cast<int>(seqs.size()));
        seqs.push_back(std::move(si));
      }
      sf.infosets.push_back(std::move(ext));
      sf.agent_infosets[static_cast<std::size_t>(agent)].push_back(idx);
    } else {
      idx = it->second;
      // Perfect recall: every member node is entered through the same own
      // sequence.
      assert(sf.infosets[static_cast<std::size_t>(idx)].parent_seq ==
             f.seq[static_cast<std::size_t>(agent)]);
    }
    sf.infosets[static_cast<std::size_t>(idx)].nodes.push_back(f.node);
    // Push in reverse action order so the walk is preorder.
    for (int a = static_cast<int>(n.actions.size()) - 1; a >= 0; --a) {
      Frame child = f;
      child.node = n.children[static_cast<std::size_t>(a)];
      child.seq[static_cast<std::size_t>(agent)] =
          sf.infosets[static_cast<std::size_t>(idx)].ext[static_cast<std::size_t>(a)];
      stack.push_back(child);
    }
  }

  sf.payoff[0] = SparseBilinear(sf.num_seqs(0), sf.num_seqs(1));
  sf.payoff[1] = SparseBilinear(sf.num_seqs(0), sf.num_seqs(1));
  for (std::size_t t = 0; t < sf.terminals.size(); ++t) {
    const auto& pay = g.node(sf.terminals[t]).payoffs;
    sf.payoff[0].add(sf.terminal_seq[t][0], sf.terminal_seq[t][1], pay[0]);
    sf.payoff[1].add(sf.terminal_seq[t][0], sf.terminal_seq[t][1], pay[1]);
  }
  return sf;
}

ValidationReport check_sequence_constraints(const SequenceForm& sf, const SequenceStrategy& x,
                                            double tol) {
  if (static_cast<int>(x.x.size()) != sf.num_seqs(x.agent))
    throw DimensionMismatch("check_sequence_constraints: strategy length mismatch");
  ValidationReport rep;
  const auto& seqs = sf.seqs[static_cast<std::size_t>(x.agent)];
  if (std::abs(x.x[0] - 1.0) > tol)
    rep.violations.push_back("x(q_empty) = " + std::to_string(x.x[0]) + " != 1");
  for (std::size_t q = 0; q < x.x.size(); ++q)
    if (x.x[q] < -tol)
      rep.violations.push_back("x(" + (q == 0 ? std::string("q_empty") : seqs[q].label) +
                               ") negative: " + std::to_string(x.x[q]));
  for (int idx : sf.agent_infosets[static_cast<std::size_t>(x.agent)]) {
    const auto& ext = sf.infosets[static_cast<std::size_t>(idx)];
    double sum = 0.0;
    for (int e : ext.ext) sum += x.x[static_cast<std::size_t>(e)];
    double parent = x.x[static_cast<std::size_t>(ext.parent_seq)];
    if (std::abs(parent - sum) > tol)
      rep.violations.push_back("flow violated at infoset " + std::to_string(ext.infoset) + ": " +
                               std::to_string(parent) + " != " + std::to_string(sum));
  }
  return rep;
}

// --- Strategy construction and conversion ----------------------------------

BehavioralStrategy uniform_behavioral(const GameTree& g, int agent) {
  BehavioralStrategy s;
  s.agent = agent;
  for (const auto& [h, labels] : agent_infoset_table(g, agent)) {
    s.infosets.push_back(h);
    s.sigma.emplace_back(labels.size(), 1.0 / static_cast<double>(labels.size()));
  }
  return s;
}

BehavioralStrategy random_behavioral(const GameTree& g, int agent, std::uint64_t seed,
                                     double mixed_floor) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BehavioralStrategy s;
  s.agent = agent;
  for (const auto& [h, labels] : agent_infoset_table(g, agent)) {
    const auto na = labels.size();
    if (mixed_floor * static_cast<double>(na) >= 1.0)
      throw std::invalid_argument("random_behavioral: floor too large for the action count");
    std::vector<double> p(na);
    double sum = 0.0;
    for (double& v : p) {
      v = unit(rng) + 1e-12;
      sum += v;
    }
    double free_mass = 1.0 - mixed_floor * static_cast<double>(na);
    for (double& v : p) v = mixed_floor + free_mass * v / sum;
    s.infosets.push_back(h);
    s.sigma.push_back(std::move(p));
  }
  return s;
}

NormalStrategy behavioral_to_normal(const BehavioralStrategy& sigma, const PlanSet& plans) {
  NormalStrategy pi;
  pi.agent = plans.agent;
  for (const Plan& p : plans.plans) {
    double prob = 1.0;
    for (std::size_t k = 0; k < p.choice.size(); ++k) {
      if (p.choice[k] < 0) continue;
      int pos = sigma.infoset_pos(plans.infosets[k]);
      prob *= sigma.sigma[static_cast<std::size_t>(pos)][static_cast<std::size_t>(p.choice[k])];
    }
    pi.pi.push_back(prob);
  }
  return pi;
}

SequenceStrategy behavioral_to_sequence(const BehavioralStrategy& sigma, const SequenceForm& sf) {
  SequenceStrategy x;
  x.agent = sigma.agent;
  const auto& seqs = sf.seqs[static_cast<std::size_t>(sigma.agent)];
  x.x.assign(seqs.size(), 1.0);
  for (std::size_t q = 1; q < seqs.size(); ++q) {
    int pos = sigma.infoset_pos(seqs[q].infoset);
    x.x[q] = x.x[static_cast<std::size_t>(seqs[q].parent)] *
             sigma.sigma[static_cast<std::size_t>(pos)][static_cast<std::size_t>(seqs[q].action)];
  }
  return x;
}

BehavioralStrategy normal_to_behavioral(const NormalStrategy& pi, const PlanSet& plans) {
  BehavioralStrategy s;
  s.agent = plans.agent;
  s.infosets = plans.infosets;
  for (std::size_t k = 0; k < plans.infosets.size(); ++k) {
    std::vector<double> mass(plans.actions[k].size(), 0.0);
    for (std::size_t p = 0; p < plans.plans.size(); ++p) {
      int choice = plans.plans[p].choice[k];
      if (choice >= 0) mass[static_cast<std::size_t>(choice)] += pi.pi[p];
    }
    double total = 0.0;
    for (double m : mass) total += m;
    if (total <= 0.0)
      mass.assign(mass.size(), 1.0 / static_cast<double>(mass.size()));
    else
      for (double& m : mass) m /= total;
    s.sigma.push_back(std::move(mass));
  }
  return s;
}

SequenceStrategy reduced_normal_to_sequence(const NormalStrategy& pi, const PlanSet& plans,
                                            const SequenceForm& sf) {
  SequenceStrategy x;
  x.agent = plans.agent;
  const auto& seqs = sf.seqs[static_cast<std::size_t>(plans.agent)];
  x.x.assign(seqs.size(), 0.0);
  x.x[0] = 1.0;
  for (std::size_t q = 1; q < seqs.size(); ++q) {
    int pos = plans.infoset_pos(seqs[q].infoset);
    for (std::size_t p = 0; p < plans.plans.size(); ++p)
      if (plans.plans[p].choice[static_cast<std::size_t>(pos)] == seqs[q].action)
        x.x[q] += pi.pi[p];
  }
  return x;
}

SequenceStrategy normal_to_sequence(const NormalStrategy& pi, const PlanSet& plans,
                                    const SequenceForm& sf) {
  SequenceStrategy x;
  x.agent = plans.agent;
  const auto& seqs = sf.seqs[static_cast<std::size_t>(plans.agent)];
  x.x.assign(seqs.size(), 0.0);
  x.x[0] = 1.0;
  for (std::size_t q = 1; q < seqs.size(); ++q) {
    for (std::size_t p = 0; p < plans.plans.size(); ++p) {
      bool consistent = true;
      for (int step = static_cast<int>(q); step > 0 && consistent;
           step = seqs[static_cast<std::size_t>(step)].parent) {
        const auto& si = seqs[static_cast<std::size_t>(step)];
        int pos = plans.infoset_pos(si.infoset);
        consistent = plans.plans[p].choice[static_cast<std::size_t>(pos)] == si.action;
      }
      if (consistent) x.x[q] += pi.pi[p];
    }
  }
  return x;
}

BehavioralStrategy sequence_to_behavioral(const SequenceStrategy& x, const SequenceForm& sf) {
  BehavioralStrategy s;
  s.agent = x.agent;
  std::map<int, std::vector<double>> by_infoset;
  for (int idx : sf.agent_infosets[static_cast<std::size_t>(x.agent)]) {
    const auto& ext = sf.infosets[static_cast<std::size_t>(idx)];
    double parent = x.x[static_cast<std::size_t>(ext.parent_seq)];
    std::vector<double> p(ext.ext.size());
    if (parent > 0.0) {
      for (std::size_t a = 0; a < ext.ext.size(); ++a)
        p[a] = x.x[static_cast<std::size_t>(ext.ext[a])] / parent;
    } else {
      p.assign(ext.ext.size(), 1.0 / static_cast<double>(ext.ext.size()));
    }
    by_infoset[ext.infoset] = std::move(p);
  }
  for (auto& [h, p] : by_infoset) {
    s.infosets.push_back(h);
    s.sigma.push_back(std::move(p));
  }
  return s;
}

std::vector<double> realization_probabilities(const SequenceForm& sf, const SequenceStrategy& x1,
                                              const SequenceStrategy& x2) {
  std::vector<double> out(sf.terminals.size());
  for (std::size_t t = 0; t < sf.terminals.size(); ++t)
    out[t] = x1.x[static_cast<std::size_t>(sf.terminal_seq[t][0])] *
             x2.x[static_cast<std::size_t>(sf.terminal_seq[t][1])];
  return out;
}

std::vector<double> realization_probabilities(const SequenceForm& sf, const PlanSet& p1,
                                              const NormalStrategy& pi1, const PlanSet& p2,
                                              const NormalStrategy& pi2) {
  return realization_probabilities(sf, normal_to_sequence(pi1, p1, sf),
                                   normal_to_sequence(pi2, p2, sf));
}

std::vector<double> realization_probabilities(const SequenceForm& sf,
                                              const BehavioralStrategy& s1,
                                              const BehavioralStrategy& s2) {
  return realization_probabilities(sf, behavioral_to_sequence(s1, sf),
                                   behavioral_to_sequence(s2, sf));
}

EquivalenceResult is_realization_equivalent(const std::vector<double>& reach_a,
                                            const std::vector<double>& reach_b, double tol) {
  if (reach_a.size() != reach_b.size())
    throw DimensionMismatch("is_realization_equivalent: reach maps differ in length");
  EquivalenceResult res;
  for (std::size_t i = 0; i < reach_a.size(); ++i)
    res.max_discrepancy = std::max(res.max_discrepancy, std::abs(reach_a[i] - reach_b[i]));
  res.equivalent = res.max_discrepancy <= tol;
  return res;
}

}  // namespace evodyn

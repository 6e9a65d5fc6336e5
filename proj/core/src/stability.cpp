#include "evodyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace evodyn {

namespace {

double direct_payoff(const SequenceForm& sf, int agent, int q, const std::vector<double>& opp) {
  double acc = 0.0;
  for (const auto& e : sf.payoff[static_cast<std::size_t>(agent)].entries) {
    int own = (agent == 0) ? e.row : e.col;
    int other = (agent == 0) ? e.col : e.row;
    if (own == q) acc += e.value * opp[static_cast<std::size_t>(other)];
  }
  return acc;
}

}  // namespace

BestResponseInfo best_response_info(const SequenceForm& sf, int agent,
                                    const std::vector<double>& opp, double tie_tol,
                                    const TieBreakMap* forced) {
  BestResponseInfo info;
  const auto& order = sf.agent_infosets[static_cast<std::size_t>(agent)];
  info.seq_value.resize(static_cast<std::size_t>(sf.num_seqs(agent)));
  for (int q = 0; q < sf.num_seqs(agent); ++q)
    info.seq_value[static_cast<std::size_t>(q)] = direct_payoff(sf, agent, q, opp);
  // Deeper infosets are discovered later; reverse order folds children first.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& ext = sf.infosets[static_cast<std::size_t>(*it)];
    int best = ext.ext.front();
    for (int e : ext.ext)
      if (info.seq_value[static_cast<std::size_t>(e)] >
          info.seq_value[static_cast<std::size_t>(best)])
        best = e;  // lowest sequence index wins ties
    double best_value = info.seq_value[static_cast<std::size_t>(best)];
    std::vector<int> tied;
    for (int e : ext.ext)
      if (info.seq_value[static_cast<std::size_t>(e)] >= best_value - tie_tol) tied.push_back(e);
    if (forced) {
      auto f = forced->find(ext.infoset);
      if (f != forced->end()) {
        if (std::find(tied.begin(), tied.end(), f->second) == tied.end())
          throw std::invalid_argument("best_response_info: forced choice at infoset " +
                                      std::to_string(ext.infoset) + " is not a best response");
        best = f->second;
      }
    }
    info.chosen[ext.infoset] = best;
    info.tied[ext.infoset] = std::move(tied);
    info.seq_value[static_cast<std::size_t>(ext.parent_seq)] += best_value;
  }
  return info;
}

CompletedGVector g_vector_completed(const SequenceForm& sf, const SequenceStrategy& x,
                                    const SequenceStrategy& x_opp, int q,
                                    const TieBreakMap* forced) {
  const int agent = x.agent;
  const auto& seqs = sf.seqs[static_cast<std::size_t>(agent)];
  BestResponseInfo br = best_response_info(sf, agent, x_opp.x, 1e-9, forced);

  CompletedGVector g;
  g.value.assign(seqs.size(), 0.0);
  g.kind.assign(seqs.size(), GEntryKind::zero);
  g.ratio_base.assign(seqs.size(), -1);
  std::map<int, int> used_completions;

  for (int s = 0; s < static_cast<int>(seqs.size()); ++s) {
    if (sf.is_prefix(agent, s, q)) {
      g.value[static_cast<std::size_t>(s)] = 1.0;
      g.kind[static_cast<std::size_t>(s)] = GEntryKind::subsequence_one;
      continue;
    }
    int c = sf.common_prefix(agent, s, q);
    int step = s;
    while (seqs[static_cast<std::size_t>(step)].parent != c ||
           seqs[static_cast<std::size_t>(step)].depth !=
               seqs[static_cast<std::size_t>(c)].depth + 1)
      step = seqs[static_cast<std::size_t>(step)].parent;
    int h = seqs[static_cast<std::size_t>(step)].infoset;
    if (sf.crosses(agent, q, h)) continue;
    double denom = x.x[static_cast<std::size_t>(c)];
    if (denom > 0.0) {
      g.value[static_cast<std::size_t>(s)] = x.x[static_cast<std::size_t>(s)] / denom;
      g.kind[static_cast<std::size_t>(s)] = GEntryKind::ratio;
      g.ratio_base[static_cast<std::size_t>(s)] = c;
      continue;
    }
    // Zero branch point: 1 on the chosen best-response path below c, 0 off it.
    bool on_path = true;
    for (int e = s; e != c && on_path; e = seqs[static_cast<std::size_t>(e)].parent)
      on_path = br.chosen.at(seqs[static_cast<std::size_t>(e)].infoset) == e;
    if (on_path) {
      g.value[static_cast<std::size_t>(s)] = 1.0;
      g.kind[static_cast<std::size_t>(s)] = GEntryKind::best_response_one;
    }
    used_completions[h] = br.chosen.at(h);
  }
  for (const auto& [h, chosen] : used_completions) g.tiebreaks.emplace_back(h, chosen);
  return g;
}

DenseMatrix jacobian(const SequenceForm& sf, const SequenceStrategy& x1,
                     const SequenceStrategy& x2, const std::array<TieBreakMap, 2>* forced) {
  const int n1 = sf.num_seqs(0);
  const int n2 = sf.num_seqs(1);
  DenseMatrix jac(n1 + n2, n1 + n2);

  // Pure-sequence payoffs against the opponent strategy.
  std::vector<double> row1(static_cast<std::size_t>(n1), 0.0);  // e_s^T U1 x2
  std::vector<double> col2(static_cast<std::size_t>(n2), 0.0);  // x1^T U2 e_s
  for (const auto& e : sf.payoff[0].entries)
    row1[static_cast<std::size_t>(e.row)] += e.value * x2.x[static_cast<std::size_t>(e.col)];
  for (const auto& e : sf.payoff[1].entries)
    col2[static_cast<std::size_t>(e.col)] += e.value * x1.x[static_cast<std::size_t>(e.row)];

  for (int qi = 0; qi < n1; ++qi) {
    CompletedGVector g = g_vector_completed(sf, x1, x2, qi,
                                            forced ? &(*forced)[0] : nullptr);
    double base = 0.0;  // (g - x1)^T U1 x2
    for (int s = 0; s < n1; ++s)
      base += (g.value[static_cast<std::size_t>(s)] - x1.x[static_cast<std::size_t>(s)]) *
              row1[static_cast<std::size_t>(s)];
    const double xq = x1.x[static_cast<std::size_t>(qi)];
    // d/dx1(qj): ratio entries only.
    std::vector<double> dg(static_cast<std::size_t>(n1), 0.0);
    for (int s = 0; s < n1; ++s) {
      if (g.kind[static_cast<std::size_t>(s)] != GEntryKind::ratio) continue;
      int c = g.ratio_base[static_cast<std::size_t>(s)];
      double xc = x1.x[static_cast<std::size_t>(c)];
      dg[static_cast<std::size_t>(s)] += row1[static_cast<std::size_t>(s)] / xc;
      dg[static_cast<std::size_t>(c)] -= x1.x[static_cast<std::size_t>(s)] / (xc * xc) *
                                         row1[static_cast<std::size_t>(s)];
    }
    for (int qj = 0; qj < n1; ++qj) {
      double v = xq * (dg[static_cast<std::size_t>(qj)] - row1[static_cast<std::size_t>(qj)]);
      if (qi == qj) v += base;
      jac(qi, qj) = v;
    }
    for (int ql = 0; ql < n2; ++ql) {
      double col = 0.0;  // (g - x1)^T U1 e_l
      for (const auto& e : sf.payoff[0].entries)
        if (e.col == ql)
          col += (g.value[static_cast<std::size_t>(e.row)] -
                  x1.x[static_cast<std::size_t>(e.row)]) *
                 e.value;
      jac(qi, n1 + ql) = xq * col;
    }
  }

  for (int qk = 0; qk < n2; ++qk) {
    CompletedGVector g = g_vector_completed(sf, x2, x1, qk,
                                            forced ? &(*forced)[1] : nullptr);
    double base = 0.0;  // x1^T U2 (g - x2)
    for (int s = 0; s < n2; ++s)
      base += (g.value[static_cast<std::size_t>(s)] - x2.x[static_cast<std::size_t>(s)]) *
              col2[static_cast<std::size_t>(s)];
    const double xq = x2.x[static_cast<std::size_t>(qk)];
    std::vector<double> dg(static_cast<std::size_t>(n2), 0.0);
    for (int s = 0; s < n2; ++s) {
      if (g.kind[static_cast<std::size_t>(s)] != GEntryKind::ratio) continue;
      int c = g.ratio_base[static_cast<std::size_t>(s)];
      double xc = x2.x[static_cast<std::size_t>(c)];
      dg[static_cast<std::size_t>(s)] += col2[static_cast<std::size_t>(s)] / xc;
      dg[static_cast<std::size_t>(c)] -= x2.x[static_cast<std::size_t>(s)] / (xc * xc) *
                                         col2[static_cast<std::size_t>(s)];
    }
    for (int ql = 0; ql < n2; ++ql) {
      double v = xq * (dg[static_cast<std::size_t>(ql)] - col2[static_cast<std::size_t>(ql)]);
      if (qk == ql) v += base;
      jac(n1 + qk, n1 + ql) = v;
    }
    for (int qj = 0; qj < n1; ++qj) {
      double row = 0.0;  // e_j^T U2 (g - x2)
      for (const auto& e : sf.payoff[1].entries)
        if (e.row == qj)
          row += e.value * (g.value[static_cast<std::size_t>(e.col)] -
                            x2.x[static_cast<std::size_t>(e.col)]);
      jac(n1 + qk, qj) = xq * row;
    }
  }
  return jac;
}

StabilityReport classify_stability(const DenseMatrix& jac, double tol) {
  StabilityReport rep;
  rep.jac = jac;
  rep.eigenvalues = eigenvalues(jac);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  bool all_negative = true;
  bool any_positive = false;
  for (const auto& ev : rep.eigenvalues) {
    if (!(ev.real() < -tol)) all_negative = false;
    if (ev.real() > tol) any_positive = true;
  }
  if (rep.eigenvalues.empty()) all_negative = false;
  rep.classification = all_negative ? StabilityClass::asymptotically_stable
                       : any_positive ? StabilityClass::unstable
                                      : StabilityClass::inconclusive;
  return rep;
}

StabilityReport analyze_stability(const SequenceForm& sf, const SequenceStrategy& x1,
                                  const SequenceStrategy& x2, double tol) {
  StabilityReport rep = classify_stability(jacobian(sf, x1, x2), tol);
  for (int agent = 0; agent < 2; ++agent) {
    const SequenceStrategy& own = (agent == 0) ? x1 : x2;
    const SequenceStrategy& opp = (agent == 0) ? x2 : x1;
    BestResponseInfo br = best_response_info(sf, agent, opp.x);
    for (int idx : sf.agent_infosets[static_cast<std::size_t>(agent)]) {
      const auto& ext = sf.infosets[static_cast<std::size_t>(idx)];
      if (own.x[static_cast<std::size_t>(ext.parent_seq)] == 0.0)
        rep.tiebreaks.emplace_back(agent, ext.infoset, br.chosen.at(ext.infoset));
    }
  }
  return rep;
}

std::vector<std::pair<int, std::vector<int>>> completion_ties(const SequenceForm& sf,
                                                              const SequenceStrategy& x,
                                                              const SequenceStrategy& x_opp,
                                                              double tie_tol) {
  BestResponseInfo br = best_response_info(sf, x.agent, x_opp.x, tie_tol);
  std::vector<std::pair<int, std::vector<int>>> out;
  for (int idx : sf.agent_infosets[static_cast<std::size_t>(x.agent)]) {
    const auto& ext = sf.infosets[static_cast<std::size_t>(idx)];
    if (x.x[static_cast<std::size_t>(ext.parent_seq)] != 0.0) continue;
    const auto& tied = br.tied.at(ext.infoset);
    if (tied.size() >= 2) out.emplace_back(ext.infoset, tied);
  }
  return out;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::asymptotically_stable:
      return "asymptotically-stable";
    case StabilityClass::unstable:
      return "unstable";
    case StabilityClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace evodyn

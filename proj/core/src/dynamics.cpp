#include "evodyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evodyn {

namespace {

void require_positive(double u, int agent) {
  if (!(u > 0.0))
    throw PayoffPositivityError(
        "average payoff of agent " + std::to_string(agent + 1) + " is " + std::to_string(u) +
        "; the discrete multiplicative update needs positive payoffs, apply an affine payoff "
        "shift first");
}

// Payoff of the pure sequence q against the opponent strategy.
double row_payoff(const SequenceForm& sf, int agent, int q, const std::vector<double>& opp) {
  double acc = 0.0;
  for (const auto& e : sf.payoff[static_cast<std::size_t>(agent)].entries) {
    int own = (agent == 0) ? e.row : e.col;
    int other = (agent == 0) ? e.col : e.row;
    if (own == q) acc += e.value * opp[static_cast<std::size_t>(other)];
  }
  return acc;
}

double g_payoff(const SequenceForm& sf, int agent, const std::vector<double>& g,
                const std::vector<double>& opp) {
  double acc = 0.0;
  for (const auto& e : sf.payoff[static_cast<std::size_t>(agent)].entries) {
    int own = (agent == 0) ? e.row : e.col;
    int other = (agent == 0) ? e.col : e.row;
    acc += g[static_cast<std::size_t>(own)] * e.value * opp[static_cast<std::size_t>(other)];
  }
  return acc;
}

}  // namespace

double expected_payoff(const SequenceForm& sf, const SequenceStrategy& x1,
                       const SequenceStrategy& x2, int agent) {
  return bilinear(sf.payoff[static_cast<std::size_t>(agent)], x1.x, x2.x);
}

std::vector<double> g_vector(const SequenceForm& sf, const SequenceStrategy& x, int q) {
  const int agent = x.agent;
  const auto& seqs = sf.seqs[static_cast<std::size_t>(agent)];
  std::vector<double> g(seqs.size(), 0.0);
  for (int s = 0; s < static_cast<int>(seqs.size()); ++s) {
    if (sf.is_prefix(agent, s, q)) {
      g[static_cast<std::size_t>(s)] = 1.0;
      continue;
    }
    int c = sf.common_prefix(agent, s, q);
    // First infoset on s strictly after the shared subsequence c.
    int step = s;
    while (seqs[static_cast<std::size_t>(step)].parent != c ||
           seqs[static_cast<std::size_t>(step)].depth !=
               seqs[static_cast<std::size_t>(c)].depth + 1)
      step = seqs[static_cast<std::size_t>(step)].parent;
    int h = seqs[static_cast<std::size_t>(step)].infoset;
    if (sf.crosses(agent, q, h)) continue;  // sibling of the q path, stays 0
    double denom = x.x[static_cast<std::size_t>(c)];
    if (denom > 0.0) g[static_cast<std::size_t>(s)] = x.x[static_cast<std::size_t>(s)] / denom;
  }
  return g;
}

std::pair<SequenceStrategy, SequenceStrategy> discrete_step_sequence(const SequenceForm& sf,
                                                                     const SequenceStrategy& x1,
                                                                     const SequenceStrategy& x2) {
  const double u1 = expected_payoff(sf, x1, x2, 0);
  const double u2 = expected_payoff(sf, x1, x2, 1);
  require_positive(u1, 0);
  require_positive(u2, 1);
  std::pair<SequenceStrategy, SequenceStrategy> out{x1, x2};
  for (int q = 0; q < sf.num_seqs(0); ++q) {
    std::vector<double> g = g_vector(sf, x1, q);
    out.first.x[static_cast<std::size_t>(q)] =
        x1.x[static_cast<std::size_t>(q)] * g_payoff(sf, 0, g, x2.x) / u1;
  }
  for (int q = 0; q < sf.num_seqs(1); ++q) {
    std::vector<double> g = g_vector(sf, x2, q);
    out.second.x[static_cast<std::size_t>(q)] =
        x2.x[static_cast<std::size_t>(q)] * g_payoff(sf, 1, g, x1.x) / u2;
  }
  return out;
}

std::pair<NormalStrategy, NormalStrategy> discrete_step_normal(const NormalForm& nf,
                                                               const NormalStrategy& pi1,
                                                               const NormalStrategy& pi2) {
  const int n1 = nf.u1.rows;
  const int n2 = nf.u1.cols;
  std::vector<double> row1(static_cast<std::size_t>(n1), 0.0);  // e_p^T U1 pi2
  std::vector<double> col2(static_cast<std::size_t>(n2), 0.0);  // pi1^T U2 e_p
  double u1 = 0.0;
  double u2 = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      row1[static_cast<std::size_t>(i)] += nf.u1(i, j) * pi2.pi[static_cast<std::size_t>(j)];
      col2[static_cast<std::size_t>(j)] += nf.u2(i, j) * pi1.pi[static_cast<std::size_t>(i)];
    }
  for (int i = 0; i < n1; ++i)
    u1 += pi1.pi[static_cast<std::size_t>(i)] * row1[static_cast<std::size_t>(i)];
  for (int j = 0; j < n2; ++j)
    u2 += pi2.pi[static_cast<std::size_t>(j)] * col2[static_cast<std::size_t>(j)];
  require_positive(u1, 0);
  require_positive(u2, 1);
  std::pair<NormalStrategy, NormalStrategy> out{pi1, pi2};
  for (int i = 0; i < n1; ++i)
    out.first.pi[static_cast<std::size_t>(i)] =
        pi1.pi[static_cast<std::size_t>(i)] * row1[static_cast<std::size_t>(i)] / u1;
  for (int j = 0; j < n2; ++j)
    out.second.pi[static_cast<std::size_t>(j)] =
        pi2.pi[static_cast<std::size_t>(j)] * col2[static_cast<std::size_t>(j)] / u2;
  return out;
}

std::pair<SequenceStrategy, SequenceStrategy> naive_discrete_step_sequence(
    const SequenceForm& sf, const SequenceStrategy& x1, const SequenceStrategy& x2) {
  const double u1 = expected_payoff(sf, x1, x2, 0);
  const double u2 = expected_payoff(sf, x1, x2, 1);
  require_positive(u1, 0);
  require_positive(u2, 1);
  std::pair<SequenceStrategy, SequenceStrategy> out{x1, x2};
  for (int q = 0; q < sf.num_seqs(0); ++q)
    out.first.x[static_cast<std::size_t>(q)] =
        x1.x[static_cast<std::size_t>(q)] * row_payoff(sf, 0, q, x2.x) / u1;
  for (int q = 0; q < sf.num_seqs(1); ++q)
    out.second.x[static_cast<std::size_t>(q)] =
        x2.x[static_cast<std::size_t>(q)] * row_payoff(sf, 1, q, x1.x) / u2;
  return out;
}

std::pair<std::vector<double>, std::vector<double>> continuous_rhs_sequence(
    const SequenceForm& sf, const SequenceStrategy& x1, const SequenceStrategy& x2) {
  const double u1 = expected_payoff(sf, x1, x2, 0);
  const double u2 = expected_payoff(sf, x1, x2, 1);
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.resize(x1.x.size());
  out.second.resize(x2.x.size());
  for (int q = 0; q < sf.num_seqs(0); ++q) {
    std::vector<double> g = g_vector(sf, x1, q);
    out.first[static_cast<std::size_t>(q)] =
        x1.x[static_cast<std::size_t>(q)] * (g_payoff(sf, 0, g, x2.x) - u1);
  }
  for (int q = 0; q < sf.num_seqs(1); ++q) {
    std::vector<double> g = g_vector(sf, x2, q);
    out.second[static_cast<std::size_t>(q)] =
        x2.x[static_cast<std::size_t>(q)] * (g_payoff(sf, 1, g, x1.x) - u2);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> naive_continuous_rhs_sequence(
    const SequenceForm& sf, const SequenceStrategy& x1, const SequenceStrategy& x2) {
  const double u1 = expected_payoff(sf, x1, x2, 0);
  const double u2 = expected_payoff(sf, x1, x2, 1);
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.resize(x1.x.size());
  out.second.resize(x2.x.size());
  for (int q = 0; q < sf.num_seqs(0); ++q)
    out.first[static_cast<std::size_t>(q)] =
        x1.x[static_cast<std::size_t>(q)] * (row_payoff(sf, 0, q, x2.x) - u1);
  for (int q = 0; q < sf.num_seqs(1); ++q)
    out.second[static_cast<std::size_t>(q)] =
        x2.x[static_cast<std::size_t>(q)] * (row_payoff(sf, 1, q, x1.x) - u2);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> continuous_rhs_normal(
    const NormalForm& nf, const NormalStrategy& pi1, const NormalStrategy& pi2) {
  const int n1 = nf.u1.rows;
  const int n2 = nf.u1.cols;
  std::vector<double> row1(static_cast<std::size_t>(n1), 0.0);
  std::vector<double> col2(static_cast<std::size_t>(n2), 0.0);
  double u1 = 0.0;
  double u2 = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      row1[static_cast<std::size_t>(i)] += nf.u1(i, j) * pi2.pi[static_cast<std::size_t>(j)];
      col2[static_cast<std::size_t>(j)] += nf.u2(i, j) * pi1.pi[static_cast<std::size_t>(i)];
    }
  for (int i = 0; i < n1; ++i)
    u1 += pi1.pi[static_cast<std::size_t>(i)] * row1[static_cast<std::size_t>(i)];
  for (int j = 0; j < n2; ++j)
    u2 += pi2.pi[static_cast<std::size_t>(j)] * col2[static_cast<std::size_t>(j)];
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.resize(static_cast<std::size_t>(n1));
  out.second.resize(static_cast<std::size_t>(n2));
  for (int i = 0; i < n1; ++i)
    out.first[static_cast<std::size_t>(i)] =
        pi1.pi[static_cast<std::size_t>(i)] * (row1[static_cast<std::size_t>(i)] - u1);
  for (int j = 0; j < n2; ++j)
    out.second[static_cast<std::size_t>(j)] =
        pi2.pi[static_cast<std::size_t>(j)] * (col2[static_cast<std::size_t>(j)] - u2);
  return out;
}

double sequence_residual(const SequenceForm& sf, int agent, const std::vector<double>& x) {
  double res = std::abs(x[0] - 1.0);
  for (double v : x) res = std::max(res, -v);
  for (int idx : sf.agent_infosets[static_cast<std::size_t>(agent)]) {
    const auto& ext = sf.infosets[static_cast<std::size_t>(idx)];
    double sum = 0.0;
    for (int e : ext.ext) sum += x[static_cast<std::size_t>(e)];
    res = std::max(res, std::abs(x[static_cast<std::size_t>(ext.parent_seq)] - sum));
  }
  return res;
}

double simplex_residual(const std::vector<double>& pi) {
  double sum = 0.0;
  double res = 0.0;
  for (double v : pi) {
    sum += v;
    res = std::max(res, -v);
  }
  return std::max(res, std::abs(sum - 1.0));
}

namespace {

void project_sequence(const SequenceForm& sf, int agent, std::vector<double>& x) {
  for (double& v : x) v = std::max(v, 0.0);
  x[0] = 1.0;
  // agent_infosets is in discovery order, so parents are final before children.
  for (int idx : sf.agent_infosets[static_cast<std::size_t>(agent)]) {
    const auto& ext = sf.infosets[static_cast<std::size_t>(idx)];
    double parent = x[static_cast<std::size_t>(ext.parent_seq)];
    double sum = 0.0;
    for (int e : ext.ext) sum += x[static_cast<std::size_t>(e)];
    if (sum > 0.0) {
      for (int e : ext.ext) x[static_cast<std::size_t>(e)] *= parent / sum;
    } else {
      for (int e : ext.ext)
        x[static_cast<std::size_t>(e)] = parent / static_cast<double>(ext.ext.size());
    }
  }
}

void project_simplex(std::vector<double>& pi) {
  double sum = 0.0;
  for (double& v : pi) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (sum > 0.0)
    for (double& v : pi) v /= sum;
  else
    for (double& v : pi) v = 1.0 / static_cast<double>(pi.size());
}

}  // namespace

std::vector<TrajectoryPoint> integrate_sequence(const SequenceForm& sf,
                                                const SequenceStrategy& x1,
                                                const SequenceStrategy& x2,
                                                const ReplicatorConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("integrate: step count must be >= 1");
  if (cfg.mode == TimeMode::continuous && !(cfg.dt > 0.0))
    throw std::invalid_argument("integrate: dt must be positive");
  SequenceStrategy a = x1;
  SequenceStrategy b = x2;
  std::vector<TrajectoryPoint> traj;

  auto record = [&](double t, double residual) {
    TrajectoryPoint p;
    p.t = t;
    p.x1 = a.x;
    p.x2 = b.x;
    p.u1 = expected_payoff(sf, a, b, 0);
    p.u2 = expected_payoff(sf, a, b, 1);
    p.residual = residual;
    traj.push_back(std::move(p));
  };
  auto residual_now = [&]() {
    return std::max(sequence_residual(sf, 0, a.x), sequence_residual(sf, 1, b.x));
  };

  record(0.0, residual_now());
  for (int step = 1; step <= cfg.steps; ++step) {
    if (cfg.mode == TimeMode::discrete) {
      auto next = (cfg.rep == Representation::naive_sequence)
                      ? naive_discrete_step_sequence(sf, a, b)
                      : discrete_step_sequence(sf, a, b);
      a = std::move(next.first);
      b = std::move(next.second);
    } else {
      auto rhs = [&](const SequenceStrategy& p, const SequenceStrategy& q) {
        return (cfg.rep == Representation::naive_sequence) ? naive_continuous_rhs_sequence(sf, p, q)
                                                           : continuous_rhs_sequence(sf, p, q);
      };
      auto axpy = [](const SequenceStrategy& base, const std::vector<double>& d, double s) {
        SequenceStrategy out = base;
        for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += s * d[i];
        return out;
      };
      if (cfg.integrator == Integrator::euler) {
        auto [d1, d2] = rhs(a, b);
        a = axpy(a, d1, cfg.dt);
        b = axpy(b, d2, cfg.dt);
      } else {
        auto k1 = rhs(a, b);
        auto k2 = rhs(axpy(a, k1.first, cfg.dt / 2), axpy(b, k1.second, cfg.dt / 2));
        auto k3 = rhs(axpy(a, k2.first, cfg.dt / 2), axpy(b, k2.second, cfg.dt / 2));
        auto k4 = rhs(axpy(a, k3.first, cfg.dt), axpy(b, k3.second, cfg.dt));
        for (std::size_t i = 0; i < a.x.size(); ++i)
          a.x[i] += cfg.dt / 6.0 *
                    (k1.first[i] + 2 * k2.first[i] + 2 * k3.first[i] + k4.first[i]);
        for (std::size_t i = 0; i < b.x.size(); ++i)
          b.x[i] += cfg.dt / 6.0 *
                    (k1.second[i] + 2 * k2.second[i] + 2 * k3.second[i] + k4.second[i]);
      }
    }
    double residual = residual_now();
    if (cfg.renormalize) {
      project_sequence(sf, 0, a.x);
      project_sequence(sf, 1, b.x);
    } else if (residual > cfg.drift_tol) {
      throw DriftError("constraint residual " + std::to_string(residual) +
                           " exceeds drift tolerance at step " + std::to_string(step),
                       step);
    }
    double t = (cfg.mode == TimeMode::discrete) ? static_cast<double>(step)
                                                : static_cast<double>(step) * cfg.dt;
    record(t, residual);
  }
  return traj;
}

std::vector<TrajectoryPoint> integrate_normal(const NormalForm& nf, const NormalStrategy& pi1,
                                              const NormalStrategy& pi2,
                                              const ReplicatorConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("integrate: step count must be >= 1");
  if (cfg.mode == TimeMode::continuous && !(cfg.dt > 0.0))
    throw std::invalid_argument("integrate: dt must be positive");
  NormalStrategy a = pi1;
  NormalStrategy b = pi2;
  std::vector<TrajectoryPoint> traj;

  auto payoffs = [&]() {
    double u1 = 0.0;
    double u2 = 0.0;
    for (int i = 0; i < nf.u1.rows; ++i)
      for (int j = 0; j < nf.u1.cols; ++j) {
        double w = a.pi[static_cast<std::size_t>(i)] * b.pi[static_cast<std::size_t>(j)];
        u1 += w * nf.u1(i, j);
        u2 += w * nf.u2(i, j);
      }
    return std::make_pair(u1, u2);
  };
  auto record = [&](double t, double residual) {
    TrajectoryPoint p;
    p.t = t;
    p.x1 = a.pi;
    p.x2 = b.pi;
    auto [u1, u2] = payoffs();
    p.u1 = u1;
    p.u2 = u2;
    p.residual = residual;
    traj.push_back(std::move(p));
  };
  auto residual_now = [&]() { return std::max(simplex_residual(a.pi), simplex_residual(b.pi)); };

  record(0.0, residual_now());
  for (int step = 1; step <= cfg.steps; ++step) {
    if (cfg.mode == TimeMode::discrete) {
      auto next = discrete_step_normal(nf, a, b);
      a = std::move(next.first);
      b = std::move(next.second);
    } else {
      auto axpy = [](const NormalStrategy& base, const std::vector<double>& d, double s) {
        NormalStrategy out = base;
        for (std::size_t i = 0; i < out.pi.size(); ++i) out.pi[i] += s * d[i];
        return out;
      };
      if (cfg.integrator == Integrator::euler) {
        auto [d1, d2] = continuous_rhs_normal(nf, a, b);
        a = axpy(a, d1, cfg.dt);
        b = axpy(b, d2, cfg.dt);
      } else {
        auto k1 = continuous_rhs_normal(nf, a, b);
        auto k2 = continuous_rhs_normal(nf, axpy(a, k1.first, cfg.dt / 2),
                                        axpy(b, k1.second, cfg.dt / 2));
        auto k3 = continuous_rhs_normal(nf, axpy(a, k2.first, cfg.dt / 2),
                                        axpy(b, k2.second, cfg.dt / 2));
        auto k4 =
            continuous_rhs_normal(nf, axpy(a, k3.first, cfg.dt), axpy(b, k3.second, cfg.dt));
        for (std::size_t i = 0; i < a.pi.size(); ++i)
          a.pi[i] += cfg.dt / 6.0 *
                     (k1.first[i] + 2 * k2.first[i] + 2 * k3.first[i] + k4.first[i]);
        for (std::size_t i = 0; i < b.pi.size(); ++i)
          b.pi[i] += cfg.dt / 6.0 *
                     (k1.second[i] + 2 * k2.second[i] + 2 * k3.second[i] + k4.second[i]);
      }
    }
    double residual = residual_now();
    if (cfg.renormalize) {
      project_simplex(a.pi);
      project_simplex(b.pi);
    } else if (residual > cfg.drift_tol) {
      throw DriftError("constraint residual " + std::to_string(residual) +
                           " exceeds drift tolerance at step " + std::to_string(step),
                       step);
    }
    double t = (cfg.mode == TimeMode::discrete) ? static_cast<double>(step)
                                                : static_cast<double>(step) * cfg.dt;
    record(t, residual);
  }
  return traj;
}

SequenceForm with_payoff_shift(const SequenceForm& sf, double c) {
  SequenceForm out = sf;
  for (auto& form : out.payoff)
    for (auto& e : form.entries) e.value += c;
  return out;
}

NormalForm with_payoff_shift(const NormalForm& nf, double c) {
  NormalForm out = nf;
  for (double& v : out.u1.data) v += c;
  for (double& v : out.u2.data) v += c;
  return out;
}

}  // namespace evodyn

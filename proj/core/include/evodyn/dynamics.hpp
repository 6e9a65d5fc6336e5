#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "evodyn/forms.hpp"

namespace evodyn {

struct PayoffPositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DriftError : std::runtime_error {
  int step;
  DriftError(const std::string& msg, int step_) : std::runtime_error(msg), step(step_) {}
};

double expected_payoff(const SequenceForm& sf, const SequenceStrategy& x1,
                       const SequenceStrategy& x2, int agent);

// The replication direction for sequence q: 1 on subsequences of q,
// conditional ratios off the q path at uncrossed infosets, 0 elsewhere.
// Ratios with a zero denominator are 0 here; the best-response completion
// lives in the stability module.
std::vector<double> g_vector(const SequenceForm& sf, const SequenceStrategy& x, int q);

std::pair<SequenceStrategy, SequenceStrategy> discrete_step_sequence(const SequenceForm& sf,
                                                                     const SequenceStrategy& x1,
                                                                     const SequenceStrategy& x2);

std::pair<NormalStrategy, NormalStrategy> discrete_step_normal(const NormalForm& nf,
                                                               const NormalStrategy& pi1,
                                                               const NormalStrategy& pi2);

// The plan-style multiplicative update applied verbatim to sequences.
// Exists to demonstrate that its output breaks the sequence-form constraints.
std::pair<SequenceStrategy, SequenceStrategy> naive_discrete_step_sequence(
    const SequenceForm& sf, const SequenceStrategy& x1, const SequenceStrategy& x2);

std::pair<std::vector<double>, std::vector<double>> continuous_rhs_sequence(
    const SequenceForm& sf, const SequenceStrategy& x1, const SequenceStrategy& x2);
std::pair<std::vector<double>, std::vector<double>> naive_continuous_rhs_sequence(
    const SequenceForm& sf, const SequenceStrategy& x1, const SequenceStrategy& x2);

std::pair<std::vector<double>, std::vector<double>> continuous_rhs_normal(
    const NormalForm& nf, const NormalStrategy& pi1, const NormalStrategy& pi2);

enum class TimeMode { discrete, continuous };
enum class Representation { sequence, normal, naive_sequence };
enum class Integrator { euler, rk4 };

struct ReplicatorConfig {
  TimeMode mode = TimeMode::discrete;
  Representation rep = Representation::sequence;
  int steps = 1;
  double dt = 1e-3;
  Integrator integrator = Integrator::rk4;
  bool renormalize = false;
  double drift_tol = 1e-6;
};

struct TrajectoryPoint {
  double t = 0.0;
  std::vector<double> x1;
  std::vector<double> x2;
  double u1 = 0.0;
  double u2 = 0.0;
  double residual = 0.0;  // pre-renormalization constraint residual
};

// Emits cfg.steps + 1 points including the initial profile. With
// renormalize off, a residual above cfg.drift_tol aborts with DriftError.
std::vector<TrajectoryPoint> integrate_sequence(const SequenceForm& sf,
                                                const SequenceStrategy& x1,
                                                const SequenceStrategy& x2,
                                                const ReplicatorConfig& cfg);

std::vector<TrajectoryPoint> integrate_normal(const NormalForm& nf, const NormalStrategy& pi1,
                                              const NormalStrategy& pi2,
                                              const ReplicatorConfig& cfg);

double sequence_residual(const SequenceForm& sf, int agent, const std::vector<double>& x);
double simplex_residual(const std::vector<double>& pi);

// Adds c to every payoff entry. Discrete-time trajectories are not invariant
// under this shift; the continuous-time rest-point set is.
SequenceForm with_payoff_shift(const SequenceForm& sf, double c);
NormalForm with_payoff_shift(const NormalForm& nf, double c);

}  // namespace evodyn

#include "evodyn/dynamics.hpp"

#include <array>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace evodyn;
using evodyn::testing::example_x1;
using evodyn::testing::example_x2;
using evodyn::testing::max_abs_diff;

namespace {

struct ExampleGame {
  GameTree g = build_example_game();
  SequenceForm sf = build_sequence_form(g);
};

void check_g(const SequenceForm& sf, const SequenceStrategy& x, const char* label,
             const std::vector<double>& expect) {
  int q = sf.find(x.agent, label);
  REQUIRE(q >= 0);
  auto g = g_vector(sf, x, q);
  CAPTURE(label);
  CHECK(max_abs_diff(g, expect) < 1e-15);
}

}  // namespace

TEST_CASE("replication directions on the example game") {
  ExampleGame f;
  SequenceStrategy x1 = example_x1();
  const double h = 0.5;  // conditional mass of each middle sequence given R1
  check_g(f.sf, x1, "", {1, 1.0 / 3, 2.0 / 3, 1.0 / 3, 1.0 / 3, 0, 2.0 / 3});
  check_g(f.sf, x1, "L1", {1, 1, 0, 0, 0, 0, 0});
  check_g(f.sf, x1, "R1", {1, 0, 1, h, h, 0, 1});
  check_g(f.sf, x1, "R1L2", {1, 0, 1, 1, 0, 0, 1});
  check_g(f.sf, x1, "R1R2", {1, 0, 1, 0, 1, 0, 1});
  check_g(f.sf, x1, "R1L3", {1, 0, 1, h, h, 1, 0});
  check_g(f.sf, x1, "R1R3", {1, 0, 1, h, h, 0, 1});
}

TEST_CASE("expected payoffs of the example profile") {
  ExampleGame f;
  CHECK(expected_payoff(f.sf, example_x1(), example_x2(), 0) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(expected_payoff(f.sf, example_x1(), example_x2(), 1) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("one discrete step reproduces the worked example") {
  ExampleGame f;
  auto [x1, x2] = discrete_step_sequence(f.sf, example_x1(), example_x2());
  std::vector<double> expect1{1, 0.25, 0.75, 0.375, 0.375, 0, 0.75};
  CHECK(max_abs_diff(x1.x, expect1) < 1e-15);
  CHECK(max_abs_diff(x2.x, {1, 1, 0}) < 1e-15);
  CHECK(check_sequence_constraints(f.sf, x1).ok());
  CHECK(check_sequence_constraints(f.sf, x2).ok());
}

TEST_CASE("the plan-style update violates the flow constraints") {
  ExampleGame f;
  auto [x1, x2] = naive_discrete_step_sequence(f.sf, example_x1(), example_x2());
  CHECK(max_abs_diff(x1.x, {0, 0.25, 0, 0.375, 0.375, 0, 0}) < 1e-15);
  CHECK(max_abs_diff(x2.x, {0.5, 0.5, 0}) < 1e-15);
  CHECK_FALSE(check_sequence_constraints(f.sf, x1).ok());
  CHECK_FALSE(check_sequence_constraints(f.sf, x2).ok());
}

TEST_CASE("discrete steps preserve the constraints on random games") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    RandomGameSpec spec;
    spec.depth = 2 + static_cast<int>(s % 3);
    spec.branching = 2 + static_cast<int>(s % 2);
    spec.merge_prob = 0.3;
    spec.payoff_min = 1.0;
    spec.payoff_max = 9.0;
    spec.seed = 1300 + s;
    spec.plan_cap = 1'000'000'000'000'000'000LL;  // sequence form only
    GameTree g = random_game(spec);
    SequenceForm sf = build_sequence_form(g);
    SequenceStrategy x1 = behavioral_to_sequence(random_behavioral(g, 0, 3 * s + 1), sf);
    SequenceStrategy x2 = behavioral_to_sequence(random_behavioral(g, 1, 3 * s + 2), sf);
    for (int step = 0; step < 10; ++step) {
      std::tie(x1, x2) = discrete_step_sequence(sf, x1, x2);
      CHECK(check_sequence_constraints(sf, x1, 1e-12).ok());
      CHECK(check_sequence_constraints(sf, x2, 1e-12).ok());
    }
  }
}

TEST_CASE("discrete co-evolution stays realization equivalent across forms") {
  ExampleGame f;
  PlanSet p1 = enumerate_plans(f.g, 0);
  PlanSet p2 = enumerate_plans(f.g, 1);
  NormalForm nf = build_normal_form(f.g, p1, p2);
  BehavioralStrategy s1 = random_behavioral(f.g, 0, 51, 0.05);
  BehavioralStrategy s2 = random_behavioral(f.g, 1, 52, 0.05);
  SequenceStrategy x1 = behavioral_to_sequence(s1, f.sf);
  SequenceStrategy x2 = behavioral_to_sequence(s2, f.sf);
  NormalStrategy pi1 = behavioral_to_normal(s1, p1);
  NormalStrategy pi2 = behavioral_to_normal(s2, p2);
  for (int step = 0; step < 100; ++step) {
    std::tie(x1, x2) = discrete_step_sequence(f.sf, x1, x2);
    std::tie(pi1, pi2) = discrete_step_normal(nf, pi1, pi2);
    auto reach_x = realization_probabilities(f.sf, x1, x2);
    auto reach_p = realization_probabilities(f.sf, p1, pi1, p2, pi2);
    REQUIRE(is_realization_equivalent(reach_x, reach_p, 1e-9).equivalent);
  }
}

TEST_CASE("positivity guard and payoff shift") {
  GameTree g = build_example_game();
  for (auto& n : g.nodes)
    if (n.kind == NodeKind::terminal) n.payoffs = {n.payoffs[0] - 3.0, n.payoffs[1] - 5.0};
  SequenceForm sf = build_sequence_form(g);
  CHECK_THROWS_AS(discrete_step_sequence(sf, example_x1(), example_x2()),
                  PayoffPositivityError);
  SequenceForm shifted = with_payoff_shift(sf, 6.0);
  auto [x1, x2] = discrete_step_sequence(shifted, example_x1(), example_x2());
  CHECK(check_sequence_constraints(shifted, x1).ok());

  // continuous-time rest points are invariant under the shift
  SequenceStrategy r1{0, {1, 1, 0, 0, 0, 0, 0}};
  SequenceStrategy r2{1, {1, 1, 0}};
  SequenceForm base = build_sequence_form(build_example_game());
  auto [d1, d2] = continuous_rhs_sequence(base, r1, r2);
  auto [e1, e2] = continuous_rhs_sequence(with_payoff_shift(base, 11.0), r1, r2);
  for (double v : d1) CHECK(std::abs(v) < 1e-12);
  for (double v : d2) CHECK(std::abs(v) < 1e-12);
  CHECK(max_abs_diff(d1, e1) < 1e-12);
  CHECK(max_abs_diff(d2, e2) < 1e-12);
}

TEST_CASE("continuous dynamics: worked derivative and tangency") {
  ExampleGame f;
  auto [d1, d2] = continuous_rhs_sequence(f.sf, example_x1(), example_x2());
  CHECK(d1[1] == doctest::Approx(-2.0 / 9.0).epsilon(1e-12));
  CHECK(std::abs(d1[0]) < 1e-15);

  // tangency: the empty sequence is frozen and children sum to their parent
  for (std::uint64_t s = 0; s < 5; ++s) {
    RandomGameSpec spec;
    spec.depth = 3;
    spec.branching = 2;
    spec.merge_prob = 0.4;
    spec.seed = 2200 + s;
    GameTree g = random_game(spec);
    SequenceForm sf = build_sequence_form(g);
    SequenceStrategy x1 = behavioral_to_sequence(random_behavioral(g, 0, 7 * s + 1), sf);
    SequenceStrategy x2 = behavioral_to_sequence(random_behavioral(g, 1, 7 * s + 2), sf);
    auto [r1, r2] = continuous_rhs_sequence(sf, x1, x2);
    CHECK(std::abs(r1[0]) < 1e-12);
    CHECK(std::abs(r2[0]) < 1e-12);
    for (const auto& ext : sf.infosets) {
      const auto& rhs = ext.agent == 0 ? r1 : r2;
      double sum = 0.0;
      for (int e : ext.ext) sum += rhs[static_cast<std::size_t>(e)];
      CHECK(sum == doctest::Approx(rhs[static_cast<std::size_t>(ext.parent_seq)]).epsilon(1e-10));
    }
  }
}

TEST_CASE("integration keeps the residual small and matches across forms") {
  ExampleGame f;
  PlanSet p1 = enumerate_plans(f.g, 0);
  PlanSet p2 = enumerate_plans(f.g, 1);
  NormalForm nf = build_normal_form(f.g, p1, p2);
  BehavioralStrategy s1 = random_behavioral(f.g, 0, 61, 0.05);
  BehavioralStrategy s2 = random_behavioral(f.g, 1, 62, 0.05);

  ReplicatorConfig cfg;
  cfg.mode = TimeMode::continuous;
  cfg.steps = 1000;
  cfg.dt = 1e-3;
  cfg.integrator = Integrator::rk4;

  auto seq_traj = integrate_sequence(f.sf, behavioral_to_sequence(s1, f.sf),
                                     behavioral_to_sequence(s2, f.sf), cfg);
  auto nor_traj = integrate_normal(nf, behavioral_to_normal(s1, p1),
                                   behavioral_to_normal(s2, p2), cfg);
  REQUIRE(seq_traj.size() == 1001);
  REQUIRE(nor_traj.size() == 1001);
  for (std::size_t k = 0; k < seq_traj.size(); ++k) {
    CHECK(seq_traj[k].residual <= 1e-6);
    auto reach_x = realization_probabilities(
        f.sf, SequenceStrategy{0, seq_traj[k].x1}, SequenceStrategy{1, seq_traj[k].x2});
    auto reach_p = realization_probabilities(f.sf, p1, NormalStrategy{0, nor_traj[k].x1}, p2,
                                             NormalStrategy{1, nor_traj[k].x2});
    REQUIRE(max_abs_diff(reach_x, reach_p) <= 1e-6);
  }
}

TEST_CASE("euler is less accurate than rk4 against a fine reference") {
  ExampleGame f;
  SequenceStrategy x1 = behavioral_to_sequence(random_behavioral(f.g, 0, 71, 0.1), f.sf);
  SequenceStrategy x2 = behavioral_to_sequence(random_behavioral(f.g, 1, 72, 0.1), f.sf);
  ReplicatorConfig fine;
  fine.mode = TimeMode::continuous;
  fine.steps = 10000;
  fine.dt = 1e-4;
  auto ref = integrate_sequence(f.sf, x1, x2, fine).back();

  ReplicatorConfig coarse = fine;
  coarse.steps = 100;
  coarse.dt = 1e-2;
  coarse.integrator = Integrator::rk4;
  auto rk4_end = integrate_sequence(f.sf, x1, x2, coarse).back();
  coarse.integrator = Integrator::euler;
  auto euler_end = integrate_sequence(f.sf, x1, x2, coarse).back();

  double rk4_err = max_abs_diff(rk4_end.x1, ref.x1);
  double euler_err = max_abs_diff(euler_end.x1, ref.x1);
  CHECK(rk4_err < euler_err);
  CHECK(rk4_err < 1e-5);
}

TEST_CASE("drift abort and the naive demonstrator inside the integrator") {
  ExampleGame f;
  ReplicatorConfig cfg;
  cfg.mode = TimeMode::discrete;
  cfg.rep = Representation::naive_sequence;
  cfg.steps = 3;
  cfg.drift_tol = 1e-6;
  CHECK_THROWS_AS(integrate_sequence(f.sf, example_x1(), example_x2(), cfg), DriftError);

  cfg.drift_tol = std::numeric_limits<double>::infinity();
  auto traj = integrate_sequence(f.sf, example_x1(), example_x2(), cfg);
  CHECK(traj[1].residual > 0.1);

  cfg.renormalize = true;
  cfg.drift_tol = 1e-6;
  auto renorm = integrate_sequence(f.sf, example_x1(), example_x2(), cfg);
  SequenceStrategy last{0, renorm.back().x1};
  CHECK(check_sequence_constraints(f.sf, last).ok());
}

TEST_CASE("trajectories are deterministic") {
  ExampleGame f;
  ReplicatorConfig cfg;
  cfg.mode = TimeMode::continuous;
  cfg.steps = 50;
  cfg.dt = 1e-2;
  auto a = integrate_sequence(f.sf, example_x1(), example_x2(), cfg);
  auto b = integrate_sequence(f.sf, example_x1(), example_x2(), cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].x1 == b[k].x1);
    CHECK(a[k].x2 == b[k].x2);
  }
}

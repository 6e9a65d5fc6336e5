#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "evodyn/benchmark.hpp"
#include "evodyn/dynamics.hpp"
#include "evodyn/forms.hpp"
#include "evodyn/game_tree.hpp"
#include "evodyn/json_io.hpp"
#include "evodyn/numerics.hpp"
#include "evodyn/stability.hpp"

namespace {

using namespace evodyn;

// Exit codes: 0 ok, 1 negative verdict, 2 parse/validation failure,
// 3 drift abort, 4 eigensolver failure, 5 payoff positivity failure.
constexpr int kExitVerdict = 1;
constexpr int kExitParse = 2;
constexpr int kExitDrift = 3;
constexpr int kExitEigen = 4;
constexpr int kExitPositivity = 5;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GameTree load_game(const std::string& path) {
  GameTree g = parse_game_json(slurp(path));
  ValidationReport rep = validate_game(g);
  if (!rep.ok()) {
    std::string msg = "invalid game";
    for (const auto& v : rep.violations) msg += "; " + v;
    throw ParseError(msg);
  }
  return g;
}

std::string seq_column_label(const std::string& label) {
  return label.empty() ? std::string("(empty)") : label;
}

int cmd_validate(const std::string& game_path) {
  GameTree g = parse_game_json(slurp(game_path));
  ValidationReport rep = validate_game(g);
  std::cout << validation_report_to_json(rep) << "\n";
  return rep.ok() ? 0 : kExitParse;
}

int cmd_forms(const std::string& game_path, const std::string& emit) {
  GameTree g = load_game(game_path);
  if (emit == "sequence") {
    std::cout << sequence_form_to_json(build_sequence_form(g)) << "\n";
  } else {
    PlanSet p1 = enumerate_plans(g, 0);
    PlanSet p2 = enumerate_plans(g, 1);
    NormalForm nf =
        emit == "reduced" ? reduce_normal_form(g, p1, p2) : build_normal_form(g, p1, p2);
    std::cout << normal_form_to_json(nf) << "\n";
  }
  return 0;
}

int cmd_run(const std::string& game_path, const std::string& rep, const std::string& time_mode,
            int steps, double dt, const std::string& integrator, const std::string& init,
            const std::string& renormalize, double payoff_shift, const std::string& out_path) {
  GameTree g = load_game(game_path);

  ReplicatorConfig cfg;
  cfg.mode = time_mode == "continuous" ? TimeMode::continuous : TimeMode::discrete;
  cfg.steps = steps;
  cfg.dt = dt;
  cfg.integrator = integrator == "euler" ? Integrator::euler : Integrator::rk4;
  cfg.renormalize = renormalize == "on";

  std::ostream* os = &std::cout;
  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path);
    if (!file_out) throw ParseError("cannot open output file: " + out_path);
    os = &file_out;
  }

  if (rep == "normal") {
    cfg.rep = Representation::normal;
    PlanSet p1 = enumerate_plans(g, 0);
    PlanSet p2 = enumerate_plans(g, 1);
    NormalForm nf = build_normal_form(g, p1, p2);
    if (payoff_shift != 0.0) nf = with_payoff_shift(nf, payoff_shift);
    NormalStrategy pi1, pi2;
    if (init == "uniform") {
      pi1 = behavioral_to_normal(uniform_behavioral(g, 0), nf.plans[0]);
      pi2 = behavioral_to_normal(uniform_behavioral(g, 1), nf.plans[1]);
    } else {
      ProfileFile prof = parse_profile_json(slurp(init));
      pi1 = profile_to_normal(prof, nf.plans[0], 0);
      pi2 = profile_to_normal(prof, nf.plans[1], 1);
    }
    auto traj = integrate_normal(nf, pi1, pi2, cfg);
    std::vector<std::string> l1, l2;
    for (std::size_t i = 0; i < nf.plans[0].plans.size(); ++i) l1.push_back(nf.plans[0].label(i));
    for (std::size_t i = 0; i < nf.plans[1].plans.size(); ++i) l2.push_back(nf.plans[1].label(i));
    write_trajectory_csv(*os, l1, l2, traj);
    return 0;
  }

  cfg.rep = rep == "naive-seq" ? Representation::naive_sequence : Representation::sequence;
  if (cfg.rep == Representation::naive_sequence)
    cfg.drift_tol = std::numeric_limits<double>::infinity();
  SequenceForm sf = build_sequence_form(g);
  if (payoff_shift != 0.0) sf = with_payoff_shift(sf, payoff_shift);
  SequenceStrategy x1, x2;
  if (init == "uniform") {
    x1 = behavioral_to_sequence(uniform_behavioral(g, 0), sf);
    x2 = behavioral_to_sequence(uniform_behavioral(g, 1), sf);
  } else {
    ProfileFile prof = parse_profile_json(slurp(init));
    x1 = profile_to_sequence(prof, sf, 0);
    x2 = profile_to_sequence(prof, sf, 1);
  }
  auto traj = integrate_sequence(sf, x1, x2, cfg);
  if (cfg.rep == Representation::naive_sequence) {
    double worst = 0.0;
    for (const auto& p : traj) worst = std::max(worst, p.residual);
    if (worst > 1e-12)
      std::cerr << "warning: drift: naive sequence update violates the flow constraints "
                   "(max residual "
                << worst << ")\n";
  }
  std::vector<std::string> l1, l2;
  for (const auto& si : sf.seqs[0]) l1.push_back(seq_column_label(si.label));
  for (const auto& si : sf.seqs[1]) l2.push_back(seq_column_label(si.label));
  write_trajectory_csv(*os, l1, l2, traj);
  return 0;
}

int cmd_stability(const std::string& game_path, const std::string& profile_path, double rest_tol,
                  double class_tol) {
  GameTree g = load_game(game_path);
  SequenceForm sf = build_sequence_form(g);
  ProfileFile prof = parse_profile_json(slurp(profile_path));
  SequenceStrategy x1 = profile_to_sequence(prof, sf, 0);
  SequenceStrategy x2 = profile_to_sequence(prof, sf, 1);
  for (int agent = 0; agent < 2; ++agent) {
    ValidationReport rep = check_sequence_constraints(sf, agent == 0 ? x1 : x2);
    if (!rep.ok())
      throw ParseError("profile violates the sequence-form constraints for agent " +
                       std::to_string(agent + 1));
  }
  auto [r1, r2] = continuous_rhs_sequence(sf, x1, x2);
  double rest_residual = 0.0;
  for (double v : r1) rest_residual = std::max(rest_residual, std::abs(v));
  for (double v : r2) rest_residual = std::max(rest_residual, std::abs(v));
  if (rest_residual > rest_tol)
    std::cerr << "warning: rest-point: profile is not a rest point (residual " << rest_residual
              << " > " << rest_tol << ")\n";
  StabilityReport rep = analyze_stability(sf, x1, x2, class_tol);
  nlohmann::json j = nlohmann::json::parse(stability_report_to_json(rep));
  j["rest_residual"] = rest_residual;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_equiv(const std::string& game_path, const std::string& normal_path,
              const std::string& sequence_path, double tol) {
  GameTree g = load_game(game_path);
  SequenceForm sf = build_sequence_form(g);
  NormalForm rnf = reduce_normal_form(g, enumerate_plans(g, 0), enumerate_plans(g, 1));
  ProfileFile nprof = parse_profile_json(slurp(normal_path));
  ProfileFile sprof = parse_profile_json(slurp(sequence_path));
  NormalStrategy pi1 = profile_to_normal(nprof, rnf.plans[0], 0);
  NormalStrategy pi2 = profile_to_normal(nprof, rnf.plans[1], 1);
  SequenceStrategy x1 = profile_to_sequence(sprof, sf, 0);
  SequenceStrategy x2 = profile_to_sequence(sprof, sf, 1);
  auto reach_n = realization_probabilities(sf, rnf.plans[0], pi1, rnf.plans[1], pi2);
  auto reach_s = realization_probabilities(sf, x1, x2);
  EquivalenceResult res = is_realization_equivalent(reach_n, reach_s, tol);
  std::cout << equivalence_to_json(res) << "\n";
  return res.equivalent ? 0 : kExitVerdict;
}

int cmd_bench(int depth, int branching, int trials, unsigned seed) {
  std::vector<int> sizes;
  for (int d = 1; d <= depth; ++d) sizes.push_back(d);
  auto rows = run_size_benchmark(sizes, branching, trials, seed);
  std::printf("depth,reduced_plans1,reduced_plans2,seqs1,seqs2,normal_step_ns,seq_step_ns\n");
  for (const auto& r : rows)
    std::printf("%d,%d,%d,%d,%d,%.17g,%.17g\n", r.units, r.num_plans1, r.num_plans2, r.num_seqs1,
                r.num_seqs2, r.normal_step_ns, r.seq_step_ns);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-form replicator dynamics for two-player extensive-form games"};
  app.require_subcommand(1);

  std::string game_path, emit = "sequence", rep = "seq", time_mode = "discrete";
  std::string integrator = "rk4", init = "uniform", renormalize = "off", out_path;
  std::string profile_path, normal_path, sequence_path;
  int steps = 100, depth = 8, branching = 2, trials = 25;
  double dt = 1e-3, rest_tol = 1e-6, class_tol = 1e-9, tol = 1e-9, payoff_shift = 0.0;
  unsigned seed = 7;

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a game file");
  validate->add_option("game", game_path)->required();

  CLI::App* forms = app.add_subcommand("forms", "Emit a strategic form as JSON");
  forms->add_option("game", game_path)->required();
  forms->add_option("--emit", emit)->check(CLI::IsMember({"normal", "reduced", "sequence"}));

  CLI::App* run = app.add_subcommand("run", "Integrate the replicator dynamics");
  run->add_option("game", game_path)->required();
  run->add_option("--rep", rep)->check(CLI::IsMember({"seq", "normal", "naive-seq"}));
  run->add_option("--time", time_mode)->check(CLI::IsMember({"discrete", "continuous"}));
  run->add_option("--steps", steps);
  run->add_option("--dt", dt);
  run->add_option("--integrator", integrator)->check(CLI::IsMember({"euler", "rk4"}));
  run->add_option("--init", init, "uniform or a strategy profile file");
  run->add_option("--renormalize", renormalize)->check(CLI::IsMember({"on", "off"}));
  run->add_option("--payoff-shift", payoff_shift, "Constant added to every payoff");
  run->add_option("--out", out_path, "CSV output path (default: stdout)");

  CLI::App* stability = app.add_subcommand("stability", "Jacobian eigenvalue stability report");
  stability->add_option("game", game_path)->required();
  stability->add_option("--profile", profile_path)->required();
  stability->add_option("--rest-tol", rest_tol);
  stability->add_option("--class-tol", class_tol);

  CLI::App* equiv = app.add_subcommand("equiv", "Realization-equivalence check");
  equiv->add_option("game", game_path)->required();
  equiv->add_option("--normal", normal_path)->required();
  equiv->add_option("--sequence", sequence_path)->required();
  equiv->add_option("--tol", tol);

  CLI::App* bench = app.add_subcommand("bench", "Size/time scaling benchmark");
  bench->add_option("--depth", depth, "Largest size parameter, runs 1..depth");
  bench->add_option("--branching", branching);
  bench->add_option("--trials", trials, "Timing repetitions per size (median reported)");
  bench->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(game_path);
    if (forms->parsed()) return cmd_forms(game_path, emit);
    if (run->parsed())
      return cmd_run(game_path, rep, time_mode, steps, dt, integrator, init, renormalize,
                     payoff_shift, out_path);
    if (stability->parsed()) return cmd_stability(game_path, profile_path, rest_tol, class_tol);
    if (equiv->parsed()) return cmd_equiv(game_path, normal_path, sequence_path, tol);
    if (bench->parsed()) return cmd_bench(depth, branching, trials, seed);
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kExitParse;
  } catch (const DriftError& e) {
    std::cerr << "error: drift: " << e.what() << "\n";
    return kExitDrift;
  } catch (const EigenSolverError& e) {
    std::cerr << "error: eigensolver: " << e.what() << "\n";
    return kExitEigen;
  } catch (const PayoffPositivityError& e) {
    std::cerr << "error: positivity: " << e.what() << "\n";
    return kExitPositivity;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}

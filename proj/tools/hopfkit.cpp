// hopfkit command-line driver: condition checks, branch tracing, the
// verification suite, and matching a checkpointed candidate against the
// traced branch. Exit codes: 0 success, 2 usage/config, 3 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "hopfkit/serialization.hpp"
#include "hopfkit/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string problem;
  std::string config_path;
  std::string out_path;
};

hopfkit::RunConfig load_config(const CommonFlags& flags) {
  hopfkit::RunConfig cfg;
  if (!flags.config_path.empty()) cfg = hopfkit::RunConfig::from_json_file(flags.config_path);
  if (!flags.problem.empty()) cfg.problem = flags.problem;  // flags override the file
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--problem", flags.problem, "problem to run (example1 or example2)")
      ->check(CLI::IsMember({"example1", "example2"}));
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--out", flags.out_path, "output path");
}

int cmd_conditions(const CommonFlags& flags, int k_max, int n_max) {
  hopfkit::RunConfig cfg = load_config(flags);
  if (k_max > 0) cfg.k_max = k_max;
  if (n_max > 0) cfg.n_max = n_max;
  auto P = cfg.build_problem();
  hopfkit::ConditionReport rep = hopfkit::run_conditions(*P, cfg.k_max, cfg.n_max);
  const std::string text = hopfkit::report_to_json(rep, cfg.to_json_text());

  std::string out = !flags.out_path.empty() ? flags.out_path : cfg.out_report;
  if (!out.empty()) {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw hopfkit::ConfigError("cannot open report path '" + out + "'");
    os << text;
  } else {
    std::cout << text;
  }
  return rep.pass_all() ? kExitOk : kExitNumerical;
}

int cmd_branch(const CommonFlags& flags, double alpha_max, int steps,
               const std::string& checkpoint_path) {
  hopfkit::RunConfig cfg = load_config(flags);
  if (steps < 1) throw hopfkit::ConfigError("branch: --steps must be >= 1");
  if (!(alpha_max > 0)) throw hopfkit::ConfigError("branch: --alpha-max must be positive");
  auto P = cfg.build_problem();

  hopfkit::CorrectorOptions copts;
  copts.nt = cfg.nt;
  copts.tol = cfg.tol_branch;

  hopfkit::Branch branch;
  bool partial = false;
  int exit_code = kExitOk;
  try {
    // --steps counts continuation intervals; the CSV gets steps + 1 rows
    branch = hopfkit::trace_branch(*P, alpha_max, steps + 1, copts);
  } catch (const hopfkit::BranchTraceError& e) {
    std::cerr << "hopfkit branch: " << e.what() << "\n";
    branch = e.partial;
    partial = true;
    exit_code = kExitNumerical;
  }
  branch.config_snapshot = cfg.to_json_text();

  std::string out = !flags.out_path.empty() ? flags.out_path : cfg.out_branch_csv;
  if (!out.empty()) {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw hopfkit::ConfigError("cannot open CSV path '" + out + "'");
    hopfkit::branch_to_csv(branch, os, partial);
  } else {
    hopfkit::branch_to_csv(branch, std::cout, partial);
  }

  std::string ckpt = !checkpoint_path.empty() ? checkpoint_path : cfg.out_checkpoint;
  if (!ckpt.empty() && !branch.points.empty()) {
    const auto& last = branch.points.back();
    std::ofstream os(ckpt, std::ios::binary);
    if (!os) throw hopfkit::ConfigError("cannot open checkpoint path '" + ckpt + "'");
    os << hopfkit::checkpoint_to_json(last.lambda, last.sigma, last.u);
  }
  return exit_code;
}

int cmd_verify(const CommonFlags& flags, const std::string& suite_name) {
  hopfkit::RunConfig cfg = load_config(flags);
  hopfkit::Suite suite;
  if (suite_name == "fast")
    suite = hopfkit::Suite::fast;
  else if (suite_name == "full")
    suite = hopfkit::Suite::full;
  else
    throw hopfkit::ConfigError("verify: unknown suite '" + suite_name + "'");

  bool all = true;
  auto results = hopfkit::run_acceptance(cfg, suite, [&](const hopfkit::CriterionResult& r) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail
              << "\n";
    std::cerr << r.id << " took " << r.seconds << " s\n";
  });
  for (const auto& r : results) all = all && r.pass;
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
  return all ? kExitOk : kExitNumerical;
}

int cmd_match(const CommonFlags& flags, const std::string& state_path, double alpha_max,
              int steps) {
  hopfkit::RunConfig cfg = load_config(flags);
  auto P = cfg.build_problem();

  std::ifstream in(state_path);
  if (!in) throw hopfkit::ConfigError("match: cannot open state file '" + state_path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  hopfkit::Checkpoint ck = hopfkit::checkpoint_from_json(text);

  hopfkit::CorrectorOptions copts;
  copts.nt = cfg.nt;
  copts.tol = cfg.tol_branch;
  hopfkit::Branch branch = hopfkit::trace_branch(*P, alpha_max, steps + 1, copts);

  hopfkit::MatchOptions mopts;
  mopts.corrector = copts;
  mopts.tol = cfg.tol_match;
  mopts.norm_window = 4.0;
  hopfkit::MatchResult m =
      hopfkit::match_solution(*P, branch, ck.lambda, ck.sigma, ck.field, mopts);
  std::cout << "{\"alpha\": " << m.alpha << ", \"theta\": " << m.theta
            << ", \"distance\": " << m.distance << "}\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopfkit: Hopf-point verification and periodic-orbit continuation"};
  app.require_subcommand(1);

  CommonFlags fc, fb, fv, fm;
  int k_max = 0, n_max = 0;
  double alpha_max = 0.5, m_alpha_max = 0.5;
  int steps = 10, m_steps = 10;
  std::string suite_name = "fast", checkpoint_path, state_path;

  auto* conditions = app.add_subcommand("conditions", "check (B1)-(B3), (K1) with margins");
  add_common(conditions, fc);
  conditions->add_option("--k-max", k_max, "largest |k| for the (B3) sweep");
  conditions->add_option("--n-max", n_max, "largest n for the (K1) sweep");

  auto* branch = app.add_subcommand("branch", "trace the bifurcating branch to a CSV");
  add_common(branch, fb);
  branch->add_option("--alpha-max", alpha_max, "largest amplitude");
  branch->add_option("--steps", steps, "continuation intervals (CSV rows = steps + 1)");
  branch->add_option("--checkpoint", checkpoint_path, "write the last point as JSON");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  add_common(verify, fv);
  verify->add_option("--suite", suite_name, "fast (one problem, no refinement) or full");

  auto* match = app.add_subcommand("match", "match a checkpointed field to the branch");
  add_common(match, fm);
  match->add_option("--state", state_path, "state checkpoint JSON")->required();
  match->add_option("--alpha-max", m_alpha_max, "branch extent for the comparison");
  match->add_option("--steps", m_steps, "continuation intervals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (conditions->parsed()) return cmd_conditions(fc, k_max, n_max);
    if (branch->parsed()) return cmd_branch(fb, alpha_max, steps, checkpoint_path);
    if (verify->parsed()) return cmd_verify(fv, suite_name);
    if (match->parsed()) return cmd_match(fm, state_path, m_alpha_max, m_steps);
  } catch (const hopfkit::ConfigError& e) {
    std::cerr << "hopfkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hopfkit::Error& e) {
    std::cerr << "hopfkit: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "hopfkit: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

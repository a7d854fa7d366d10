#ifndef HOPFKIT_CONFIG_HPP
#define HOPFKIT_CONFIG_HPP

#include <memory>
#include <string>

#include "hopfkit/example1.hpp"
#include "hopfkit/example2.hpp"

namespace hopfkit {

/// One parseable source of truth for a run: a single JSON document, with CLI
/// flags layered on top. Unknown keys are rejected.
struct RunConfig {
  std::string problem = "example2";
  Example1Config ex1{};
  Example2Config ex2{};
  int nt = 8;

  double tol_newton = 1e-10;
  double tol_branch = 1e-9;
  double tol_match = 1e-6;

  int k_max = 16;
  int n_max = 64;

  std::string out_report;
  std::string out_branch_csv;
  std::string out_checkpoint;

  void validate() const;

  /// Builds, refines and bordering-prepares the selected problem.
  std::unique_ptr<EvolutionProblem> build_problem() const;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
  std::string to_json_text() const;  // canonical snapshot embedded in reports
};

}  // namespace hopfkit

#endif

#ifndef HOPFKIT_VERIFY_HPP
#define HOPFKIT_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "hopfkit/config.hpp"

namespace hopfkit {

enum class Suite { fast, full };

struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria at their pinned tolerances.
/// `fast` runs the criteria touching the configured problem only and skips
/// the refinement studies; `full` runs both problems and every study.
/// Each finished criterion is streamed through on_result.
std::vector<CriterionResult> run_acceptance(
    const RunConfig& cfg, Suite suite,
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace hopfkit

#endif

#ifndef HOPFKIT_CONTINUATION_HPP
#define HOPFKIT_CONTINUATION_HPP

#include <string>
#include <vector>

#include "hopfkit/errors.hpp"
#include "hopfkit/extended.hpp"

namespace hopfkit {

/// One corrected point of the bifurcating branch: u = alpha u_star + alpha eta
/// with l^1 eta = l^2 eta = 0.
struct BranchPoint {
  double alpha = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  SpaceTimeField u;
  double eta_norm = 0.0;    // ||eta||_X
  double g_residual = 0.0;  // ||g||_Y at the point
  int newton_iters = 0;
};

struct Branch {
  std::vector<BranchPoint> points;  // strictly increasing alpha
  std::string problem;
  std::string config_snapshot;
};

struct CorrectorOptions {
  double tol = 1e-9;  // residual <= tol * max(|alpha|, alpha^2) * max(1, ||u||_X)
  int max_iters = 25;
  int max_halvings = 8;
  int nt = 8;
};

/// Closed-form branch point lambda = alpha^2, sigma = 0, u = alpha u_star
/// (eta = 0) built from the problem's analytic eigenvector samples; serves as
/// the oracle for the corrector.
BranchPoint exact_branch(const EvolutionProblem& P, double alpha, int nt = 8);

/// Solves {g(Lambda, alpha u_star + alpha eta) = 0, l^1 eta = 0, l^2 eta = 0}
/// for (lambda, sigma, eta) at fixed signed amplitude alpha by damped
/// quasi-Newton (core Jacobian frozen at h_u(lambda, 0), exact bordered
/// columns). alpha = 0 returns the trivial point exactly.
BranchPoint corrector(const EvolutionProblem& P, double alpha, const BranchPoint& guess,
                      const CorrectorOptions& opts = {});

/// Corrector failure during a trace; carries the partial branch.
class BranchTraceError : public Error {
 public:
  BranchTraceError(const std::string& msg, Branch partial_branch)
      : Error(msg), partial(std::move(partial_branch)) {}
  Branch partial;
};

/// Equispaced amplitude grid with `steps` points from 0 to alpha_max
/// inclusive; each point is corrected from the previous one rescaled
/// (eta by r, zeta by r^2, matching the branch's leading-order form).
Branch trace_branch(const EvolutionProblem& P, double alpha_max, int steps,
                    const CorrectorOptions& opts = {});

/// Branch symmetry cross-check: corrects the branch at -alpha directly and
/// returns max over points of |zeta(-a) - zeta(a)| + ||eta(-a) + tau_pi eta(a)||_X.
double check_symmetry(const EvolutionProblem& P, const Branch& branch,
                      const CorrectorOptions& opts = {});

/// Phase alignment: theta in [0, 2pi) with e^{i theta} = (p - iq)/sqrt(p^2+q^2)
/// for (p, q) = l(v); the aligned field tau_theta v has l^2 = 0, l^1 >= 0.
std::pair<double, SpaceTimeField> phase_align(const EvolutionProblem& P,
                                              const SpaceTimeField& v);

struct MatchOptions {
  double lambda_window = 0.25;
  double sigma_window = 0.25;
  double norm_window = 1.0;
  double tol = 1e-6;  // certified X-distance to the branch point
  CorrectorOptions corrector;
};

struct MatchResult {
  double alpha = 0.0;
  double theta = 0.0;
  double distance = 0.0;  // ||aligned v - (alpha u_star + alpha eta)||_X
};

/// Operational form of branch uniqueness: phase-aligns v, reads the amplitude
/// alpha = l^1(aligned v), re-corrects at that alpha, and certifies the
/// distance. Candidates outside the uniqueness window are a domain error;
/// residuals above tol raise NoMatchError.
MatchResult match_solution(const EvolutionProblem& P, const Branch& branch, double lambda,
                           double sigma, const SpaceTimeField& v,
                           const MatchOptions& opts = {});

}  // namespace hopfkit

#endif

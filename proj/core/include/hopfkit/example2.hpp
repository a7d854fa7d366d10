#ifndef HOPFKIT_EXAMPLE2_HPP
#define HOPFKIT_EXAMPLE2_HPP

#include <memory>

#include "hopfkit/problem.hpp"

namespace hopfkit {

/// FitzHugh-Nagumo-type system on (0, pi) with Dirichlet ends, discretized in
/// the sine basis (modes 1..nx). The operator acts mode-diagonally,
///   A_n = [[-1, 1], [-2, 2 - n^2]],
/// V = H^1_0 x L^2 with exact mode weights (pi/2) n^2 and (pi/2), and the
/// cubic nonlinearity h = (0, u (lambda sin^2 x - 2u^2 + 2uv - v^2)) is
/// evaluated by collocation on >= 3 nx + 1 points (exact de-aliasing).
struct Example2Config {
  int nx = 64;  // number of sine modes
  void validate() const;
};

class Example2Problem final : public EvolutionProblem {
 public:
  explicit Example2Problem(const Example2Config& cfg);

  std::string name() const override { return "example2"; }
  const Example2Config& config() const { return cfg_; }

  SpatialVector h_eval(double lambda, const SpatialVector& s) const override;
  SpatialVector h_u_apply(double lambda, const SpatialVector& s,
                          const SpatialVector& w) const override;
  SpatialVector h_lambda_eval(double lambda, const SpatialVector& s) const override;

  /// Per-mode 2x2 closed-form solves.
  std::unique_ptr<ShiftedOperator> shifted(Complex z) const override;
  /// Exact: V-metric singular values collected from the 2x2 blocks.
  std::vector<double> shifted_singular_values(Complex z, int count) const override;

  /// Derived from the componentwise closed-form resolvent bounds combined
  /// with the Poincare inequality; holds for every temporal mode n >= 2.
  std::pair<double, int> k1_reference_bound() const override { return {3.2, 2}; }

  // sine-collocation helpers (grid of 3 nx interior points)
  VecXd synthesize(const Eigen::Map<const VecXd>& modes) const;
  VecXd project(const VecXd& values) const;

 private:
  Example2Config cfg_;
  int mgrid_;                    // number of subintervals, 3 nx + 1
  Eigen::MatrixXd sin_table_;    // (point, mode)
  VecXd sin2_;                   // sin^2(x_j) on the grid
};

/// Builds the problem with psi_star = (sin x, (1+i) sin x) and
/// psi_sharp = ((1+i) sin x, sin x).
std::unique_ptr<Example2Problem> ex2_build(const Example2Config& cfg = {});

}  // namespace hopfkit

#endif

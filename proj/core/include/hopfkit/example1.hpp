#ifndef HOPFKIT_EXAMPLE1_HPP
#define HOPFKIT_EXAMPLE1_HPP

#include <memory>

#include "hopfkit/problem.hpp"

namespace hopfkit {

/// Coupled reaction-diffusion pair on the line, truncated to [-L, L] with
/// homogeneous Dirichlet ends and second-order central differences:
///   A (phi, psi) = (phi_xx - psi - rho phi, psi_xx + phi - rho psi),
///   h(lambda, (phi, psi)) = (phi, psi) * (lambda kappa^2 - phi^2 - psi^2),
/// rho = (2 tanh^2(x/2) - 1)/4, kappa = sech(x/2). V is the composite
/// trapezoidal L^2 x L^2 product.
struct Example1Config {
  double L = 30.0;  // half-width; kappa, rho - 1/4 decay exponentially
  int nx = 600;     // interior grid points
  void validate() const;
};

class Example1Problem final : public EvolutionProblem {
 public:
  explicit Example1Problem(const Example1Config& cfg);

  std::string name() const override { return "example1"; }
  const Example1Config& config() const { return cfg_; }
  double grid_h() const { return h_; }
  double grid_x(int j) const { return -cfg_.L + (j + 1) * h_; }
  const VecXd& kappa() const { return kappa_; }
  const VecXd& rho() const { return rho_; }

  SpatialVector h_eval(double lambda, const SpatialVector& s) const override;
  SpatialVector h_u_apply(double lambda, const SpatialVector& s,
                          const SpatialVector& w) const override;
  SpatialVector h_lambda_eval(double lambda, const SpatialVector& s) const override;

  /// Certified resolvent decay constant: n ||(in - A_c)^{-1}|| <= 8 sqrt(2)/7
  /// for n >= 4, by the constant-coefficient symbol bound plus the
  /// ||rho||_inf <= 1/4 perturbation step. Small slack for discretization.
  std::pair<double, int> k1_reference_bound() const override {
    return {8.0 * std::sqrt(2.0) / 7.0 + 0.05, 4};
  }

 private:
  Example1Config cfg_;
  double h_;
  VecXd kappa_, rho_;
};

/// Builds the discretized problem, refines psi_star = (kappa, -i kappa) by
/// shifted inverse iteration, and sets psi_sharp = psi_star (A is V-normal
/// here, so the critical eigenvector is also the adjoint null vector).
std::unique_ptr<Example1Problem> ex1_build(const Example1Config& cfg = {});

}  // namespace hopfkit

#endif

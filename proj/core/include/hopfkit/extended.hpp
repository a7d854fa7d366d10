#ifndef HOPFKIT_EXTENDED_HPP
#define HOPFKIT_EXTENDED_HPP

#include <memory>

#include "hopfkit/problem.hpp"

namespace hopfkit {

/// Unknowns of the rescaled problem: Lambda = (lambda, sigma) and the field.
struct ExtendedState {
  double lambda = 0.0;
  double sigma = 0.0;
  SpaceTimeField u;
};

/// g(Lambda, u) = u_t - (sigma + 1)(A u + h(lambda, u)) as a Y-field with the
/// same temporal resolution (nonlinear part collocated, then reprojected).
SpaceTimeField residual_g(const EvolutionProblem& P, const ExtendedState& s);

/// Extended system H(Lambda, u) = (l^1 u - 1, l^2 u, g_u(Lambda, 0) u), where
/// g_u(Lambda, 0) u = u_t - (sigma + 1)(A + lambda f0_lambda_u) u.
struct HValue {
  double h1 = 0.0, h2 = 0.0;
  SpaceTimeField gu;
  double norm(const EvolutionProblem& P) const;
};
HValue assemble_H(const EvolutionProblem& P, const ExtendedState& s);

/// Frozen Jacobian DH* = DH(0, u_star):
///   (lambda, sigma, u) -> (l^1 u, l^2 u, u_t - A u - sigma A u_star - lambda f0 u_star).
/// Matrix-free; a dense assembly is available at desk scale.
class DHStar {
 public:
  DHStar(const EvolutionProblem& P, int nt);

  struct Value {
    double l1 = 0.0, l2 = 0.0;
    SpaceTimeField field;
  };
  Value apply(double lambda, double sigma, const SpaceTimeField& u) const;

  const SpaceTimeField& u_star() const { return u_star_; }
  const SpaceTimeField& col_lambda() const { return col_lambda_; }  // -f0 u_star
  const SpaceTimeField& col_sigma() const { return col_sigma_; }    // -A u_star

  /// Dense matrix over coefficients ordered (lambda, sigma, modes 0..nt).
  Eigen::MatrixXd assemble_dense() const;

 private:
  const EvolutionProblem& P_;
  int nt_;
  SpaceTimeField u_star_, col_lambda_, col_sigma_;
};

DHStar jacobian_DH_star(const EvolutionProblem& P, int nt);

/// Discrete isolatedness certificate: smallest singular value of DH* in the
/// (R^2 x X -> R^2 x Y) operator convention, plus the plain Euclidean
/// coefficient convention. Exploits the temporal-mode decoupling at Lambda=0.
struct IsolatednessMargin {
  double metric = 0.0;
  double euclidean = 0.0;
  std::vector<std::pair<int, double>> per_mode_metric;  // (temporal mode, sigma_min)
};
IsolatednessMargin isolatedness_margin(const EvolutionProblem& P, int nt);

/// Solves u_t - A u = z on the high-frequency subspace (modes |n| >= 2) by
/// mode-wise resolvent solves q_n = (in - A_c)^{-1} z_hat(n). Low-mode content
/// above tol_mode is a domain error; the solve residual is checked against
/// 1e-9 ||z||_Y.
SpaceTimeField solve_high_frequency(const EvolutionProblem& P, const SpaceTimeField& z,
                                    double tol_mode = 1e-9);

struct NewtonOptions {
  double tol = 1e-10;     // residual target relative to max(1, ||u||_X)
  int max_iters = 25;
  int max_halvings = 8;
};

/// Damped Newton on H from a nearby guess; returns the refined isolated
/// solution (0, u_star) up to discretization. The optional trace receives the
/// residual history (size = iterations + 1).
ExtendedState newton_refine_Hstar(const EvolutionProblem& P, const ExtendedState& guess,
                                  const NewtonOptions& opts = {},
                                  std::vector<double>* residual_trace = nullptr);

// ---- shared mode-wise linear algebra ----

/// Factorizations of (in - s B_c), n = 0..nt, for B = A + lambda f0_lambda_u;
/// this is the frequency-decoupled core of every extended-system Jacobian.
class ModewiseCoreSolver {
 public:
  ModewiseCoreSolver(const EvolutionProblem& P, int nt, double lambda, double s_factor,
                     bool with_transpose = false);
  SpaceTimeField solve(const SpaceTimeField& rhs) const;
  SpaceTimeField solve_transpose(const SpaceTimeField& rhs) const;
  SpaceTimeField apply(const SpaceTimeField& u) const;

 private:
  const EvolutionProblem& P_;
  int nt_;
  double s_;
  SparseMat B_;
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Solves the bordered system
///   l^1 du = r1, l^2 du = r2,  core du + dl col_l + ds col_s = rY
/// by two extra core solves and a 2x2 Schur complement.
struct BorderedSolution {
  double dlambda = 0.0, dsigma = 0.0;
  SpaceTimeField du;
};
BorderedSolution solve_bordered(const EvolutionProblem& P, const ModewiseCoreSolver& core,
                                const SpaceTimeField& col_l, const SpaceTimeField& col_s,
                                double r1, double r2, const SpaceTimeField& rY);

}  // namespace hopfkit

#endif

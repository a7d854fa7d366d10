#ifndef HOPFKIT_PROBLEM_HPP
#define HOPFKIT_PROBLEM_HPP

#include <Eigen/Sparse>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hopfkit/errors.hpp"
#include "hopfkit/spacetime.hpp"

namespace hopfkit {

using SparseMat = Eigen::SparseMatrix<double>;
using SparseMatC = Eigen::SparseMatrix<Complex>;

/// Factorized shifted operator (z - A_c). solve_adjoint solves with the plain
/// coefficient-space conjugate transpose (zbar - A^T); metric weighting is
/// applied by the callers that need V-norm quantities.
class ShiftedOperator {
 public:
  virtual ~ShiftedOperator() = default;
  virtual SpatialVectorC solve(const SpatialVectorC& rhs) const = 0;
  virtual SpatialVectorC solve_adjoint(const SpatialVectorC& rhs) const = 0;
  /// Cheap estimate of the smallest singular value, for the proximity guard.
  virtual double sigma_min_estimate() const = 0;
  virtual double scale() const = 0;  // magnitude of the operator, for relative guards
};

/// Spatial discretization of one evolution problem u_t = A u + h(lambda, u).
///
/// The V inner product is diagonal in the coefficient basis:
///   (x, y)_V = sum_j w_j x_j conj(y_j)   (conjugate-linear in the SECOND slot),
/// and (x, y)_U = (Ax, Ay)_V. Instances are immutable after build + bordering
/// preparation; all apply/solve members are safe for concurrent use.
class EvolutionProblem {
 public:
  virtual ~EvolutionProblem() = default;

  virtual std::string name() const = 0;
  int nx() const { return nx_; }
  int dim() const { return SpaceTimeField::kComponents * nx_; }

  const VecXd& metric_diag() const { return metric_; }
  const SparseMat& A_matrix() const { return A_; }
  /// Matrix of f0_lambda_u = d/dlambda h_u(lambda, 0) (lambda-independent here).
  const SparseMat& f_lambda_u_matrix() const { return f_lambda_u_; }

  SpatialVector apply_A(const SpatialVector& x) const { return A_ * x; }
  SpatialVectorC apply_A_c(const SpatialVectorC& x) const;

  // pointwise-in-time nonlinearity and partial derivatives
  virtual SpatialVector h_eval(double lambda, const SpatialVector& state) const = 0;
  virtual SpatialVector h_u_apply(double lambda, const SpatialVector& state,
                                  const SpatialVector& dir) const = 0;
  virtual SpatialVector h_lambda_eval(double lambda, const SpatialVector& state) const = 0;

  SpatialVectorC h_lambda_u_apply(const SpatialVectorC& dir) const;

  /// Factorizes (z - A_c) for repeated solves. Guarded one-shot solves go
  /// through resolvent_solve below.
  virtual std::unique_ptr<ShiftedOperator> shifted(Complex z) const;

  /// The `count` smallest singular values of (z - A_c) in the V metric.
  virtual std::vector<double> shifted_singular_values(Complex z, int count) const;

  /// Certified (K1) cap: first component bounds n ||(in - A_c)^{-1}|| for all
  /// n >= second component. Problems without a certificate report +inf.
  virtual std::pair<double, int> k1_reference_bound() const {
    return {std::numeric_limits<double>::infinity(), 2};
  }

  Complex inner_V(const SpatialVectorC& x, const SpatialVectorC& y) const;
  Complex inner_U(const SpatialVectorC& x, const SpatialVectorC& y) const;
  double inner_V(const SpatialVector& x, const SpatialVector& y) const;
  double inner_U(const SpatialVector& x, const SpatialVector& y) const;
  double norm_V(const SpatialVectorC& x) const { return std::sqrt(std::abs(inner_V(x, x))); }
  double norm_V(const SpatialVector& x) const { return std::sqrt(inner_V(x, x)); }
  double norm_U(const SpatialVectorC& x) const { return std::sqrt(std::abs(inner_U(x, x))); }

  // prepared data
  const SpatialVectorC& psi_star() const { return psi_star_; }
  const SpatialVectorC& psi_star_initial() const { return psi_star_initial_; }
  const SpatialVectorC& psi_sharp() const { return psi_sharp_; }
  const SpatialVector& bordering() const;
  bool has_bordering() const { return bordering_.size() > 0; }
  double psi_star_norm_target() const { return psi_star_norm_target_; }

  void set_psi_star(const SpatialVectorC& v) { psi_star_ = v; }
  void set_psi_sharp(const SpatialVectorC& v) { psi_sharp_ = v; }
  void set_bordering(const SpatialVector& d) { bordering_ = d; }

  /// u_star = L1 psi_star as a field with temporal resolution nt.
  SpaceTimeField u_star(int nt) const { return l1_embed(psi_star_, nt); }

 protected:
  int nx_ = 0;
  VecXd metric_;
  SparseMat A_, f_lambda_u_;
  SpatialVectorC psi_star_, psi_star_initial_, psi_sharp_;
  SpatialVector bordering_;
  double psi_star_norm_target_ = 1.0;
};

/// Solves (z - A_c) w = rhs to relative residual <= 1e-11, with a spectrum
/// proximity guard at sigma_min < 1e-13 * scale.
SpatialVectorC resolvent_solve(const EvolutionProblem& P, Complex z, const SpatialVectorC& rhs);

// ---- field-level operations tied to a problem ----

/// A applied mode-wise to every temporal coefficient.
SpaceTimeField apply_A_field(const EvolutionProblem& P, const SpaceTimeField& u);

/// Any real matrix applied mode-wise to every temporal coefficient.
SpaceTimeField apply_matrix_field(const SparseMat& mat, const SpaceTimeField& u);

/// T1 w = w_t - A w = (b - Aa) (x) c_1 - (a + Ab) (x) s_1 on mode-1 fields.
SpaceTimeField apply_T1(const EvolutionProblem& P, const SpaceTimeField& w,
                        double tol_mode = 1e-9);

/// Bordering functionals l = (l^1, l^2):
///   l^1 u = (1/pi) int (d, u(t))_U cos t dt,  l^2 u likewise with sin t;
/// evaluated exactly from the mode-1 coefficients.
std::pair<double, double> functional_l(const EvolutionProblem& P, const SpaceTimeField& u);

/// Collocated nonlinearity h(lambda, u(t)) reprojected onto modes 0..nt.
SpaceTimeField h_field(const EvolutionProblem& P, double lambda, const SpaceTimeField& u);

/// Collocated h_u(lambda, u(t)) w(t) reprojected.
SpaceTimeField h_u_field(const EvolutionProblem& P, double lambda, const SpaceTimeField& u,
                         const SpaceTimeField& w);

/// Collocated dh/dlambda(lambda, u(t)) reprojected.
SpaceTimeField h_lambda_field(const EvolutionProblem& P, double lambda, const SpaceTimeField& u);

/// Y = L^2((0,2pi), V) norm from coefficients:
///   ||u||_Y^2 = 2pi (||a_0||_V^2 + sum_n (||a_n||_V^2 + ||b_n||_V^2)/2).
double norm_Y(const EvolutionProblem& P, const SpaceTimeField& u);

/// X = H^1_per((0,2pi), V) cap L^2((0,2pi), U) norm from coefficients.
double norm_X(const EvolutionProblem& P, const SpaceTimeField& u);

/// Solves the 2x2 Gram system for d in span{Re psi_star, Im psi_star} with
/// (d, Re psi_star)_U = 1 and (d, Im psi_star)_U = 0, which gives
/// (d, psi_star)_{U_c} = 1 under the conjugate-linear-second convention.
/// Stores d in the problem and returns it.
SpatialVector prepare_bordering(EvolutionProblem& P);

}  // namespace hopfkit

#endif

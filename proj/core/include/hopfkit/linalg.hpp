#ifndef HOPFKIT_LINALG_HPP
#define HOPFKIT_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <utility>

namespace hopfkit {

using Complex = std::complex<double>;
using VecXd = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;

/// Worker count for sweep fan-out: min(HOPFKIT_THREADS, hardware), at least 1.
int worker_count();

/// Runs fn(i) for i in [0, n) across workers. Each index owns its output slot,
/// so results collect in index order regardless of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

/// Repeated solves with a fixed shifted operator (z - A_c) and its
/// coefficient-space conjugate transpose. Metric handling is the caller's job.
struct SolvePair {
  std::function<VecXc(const VecXc&)> solve;          // (z - A)^{-1} b
  std::function<VecXc(const VecXc&)> solve_adjoint;  // (z - A)^{-H} b
  int dim = 0;
};

/// Smallest singular value of B between diagonally weighted spaces,
///   sigma = min ||B x||_{w_out} / ||x||_{w_in},
/// by inverse power iteration on the normal equations of the scaled operator
/// W_out^{1/2} B W_in^{-1/2}. Deterministic start vector.
double smallest_singular(const SolvePair& B, const VecXd& w_out, const VecXd& w_in,
                         double rel_tol = 1e-12, int max_iter = 500);

/// Two smallest singular values (deflated inverse power iteration).
std::pair<double, double> two_smallest_singulars(const SolvePair& B, const VecXd& w_out,
                                                 const VecXd& w_in, double rel_tol = 1e-12,
                                                 int max_iter = 500);

/// Smallest generalized singular value of a real operator B with diagonal
/// output metric and a general SPD input metric:
///   sigma^2 = min (x^T B^T W_out B x) / (x^T M_in x).
/// Needs B applications plus solves with B and B^T.
struct RealPencilOps {
  std::function<VecXd(const VecXd&)> apply;            // B x
  std::function<VecXd(const VecXd&)> solve;            // B^{-1} b
  std::function<VecXd(const VecXd&)> solve_transpose;  // B^{-T} b
  std::function<VecXd(const VecXd&)> metric_in;        // M_in x
  int dim = 0;
};
double smallest_generalized_singular(const RealPencilOps& ops, const VecXd& w_out,
                                     double rel_tol = 1e-11, int max_iter = 400);

/// Dense fallback for the same quantity, exact and safe for singular B.
double smallest_generalized_singular_dense(const Eigen::MatrixXd& B, const VecXd& w_out,
                                           const Eigen::MatrixXd& metric_in);

/// Complex counterpart of RealPencilOps (adjoint solves instead of transpose).
struct ComplexPencilOps {
  std::function<VecXc(const VecXc&)> apply;
  std::function<VecXc(const VecXc&)> solve;
  std::function<VecXc(const VecXc&)> solve_adjoint;
  std::function<VecXc(const VecXc&)> metric_in;
  int dim = 0;
};
double smallest_generalized_singular(const ComplexPencilOps& ops, const VecXd& w_out,
                                     double rel_tol = 1e-11, int max_iter = 400);

/// Composite Simpson quadrature of f over [a, b] with n subintervals (n even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace hopfkit

#endif

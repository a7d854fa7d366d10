#ifndef HOPFKIT_TESTS_SUPPORT_HPP
#define HOPFKIT_TESTS_SUPPORT_HPP

#include "hopfkit/problem.hpp"

namespace testsupport {

/// Minimal concrete problem for unit tests: explicit operator matrix, diagonal
/// metric, configurable f0_lambda_u, and a zero nonlinearity beyond it
/// (h(lambda, u) = lambda * F u, so h_u(lambda, 0) = lambda F and h(., 0) = 0).
class StubProblem : public hopfkit::EvolutionProblem {
 public:
  StubProblem(const hopfkit::SparseMat& A, const hopfkit::VecXd& metric,
              const hopfkit::SparseMat& f_lambda_u, const hopfkit::SpatialVectorC& psi_guess,
              double norm_target) {
    nx_ = static_cast<int>(metric.size()) / 2;
    A_ = A;
    metric_ = metric;
    f_lambda_u_ = f_lambda_u;
    psi_star_initial_ = psi_guess;
    psi_star_ = psi_guess;
    psi_sharp_ = psi_guess;
    psi_star_norm_target_ = norm_target;
  }

  std::string name() const override { return "stub"; }

  hopfkit::SpatialVector h_eval(double lambda, const hopfkit::SpatialVector& s) const override {
    return lambda * (f_lambda_u_ * s);
  }
  hopfkit::SpatialVector h_u_apply(double lambda, const hopfkit::SpatialVector&,
                                   const hopfkit::SpatialVector& dir) const override {
    return lambda * (f_lambda_u_ * dir);
  }
  hopfkit::SpatialVector h_lambda_eval(double, const hopfkit::SpatialVector& s) const override {
    return f_lambda_u_ * s;
  }
};

inline hopfkit::SparseMat dense_to_sparse(const Eigen::MatrixXd& M) {
  return M.sparseView().eval();
}

/// 2x2 rotation block [[0, -1], [1, 0]]: eigenvalues +-i, eigenvector (1, -i).
inline StubProblem rotation_stub(double shift = 0.0, double coupling = 0.0) {
  Eigen::MatrixXd A(2, 2);
  A << shift, -1.0, 1.0, shift;
  Eigen::MatrixXd F = coupling * Eigen::MatrixXd::Identity(2, 2);
  hopfkit::SpatialVectorC psi(2);
  psi << 1.0, hopfkit::Complex(0.0, -1.0);
  return StubProblem(dense_to_sparse(A), hopfkit::VecXd::Ones(2), dense_to_sparse(F), psi,
                     std::sqrt(2.0));
}

}  // namespace testsupport

#endif

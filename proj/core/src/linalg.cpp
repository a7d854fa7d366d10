#include "hopfkit/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

#include "hopfkit/errors.hpp"

namespace hopfkit {

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("HOPFKIT_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

VecXc deterministic_start(int dim) {
  std::mt19937 rng(0x5eed5u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VecXc v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(dist(rng), dist(rng));
  v /= v.norm();
  return v;
}

// Inverse power iteration for the smallest singular value of the scaled
// operator Bt = W_out^{1/2} B W_in^{-1/2}, optionally deflating against a
// converged right singular vector. Returns {sigma, right singular vector}.
std::pair<double, VecXc> smallest_singular_deflated(const SolvePair& B, const VecXd& w_out,
                                                    const VecXd& w_in, const VecXc* deflate,
                                                    double rel_tol, int max_iter) {
  const int n = B.dim;
  const VecXd so = w_out.cwiseSqrt();
  const VecXd si = w_in.cwiseSqrt();
  // Bt^{-H} y = W_out^{-1/2} B^{-H} W_in^{1/2} y ; Bt^{-1} y = W_in^{1/2} B^{-1} W_out^{-1/2} y
  auto inv_adj = [&](const VecXc& y) -> VecXc {
    VecXc t = B.solve_adjoint((si.array() * y.array()).matrix());
    return (t.array() / so.array()).matrix();
  };
  auto inv = [&](const VecXc& y) -> VecXc {
    VecXc t = B.solve((y.array() / so.array()).matrix());
    return (si.array() * t.array()).matrix();
  };
  VecXc v = deterministic_start(n);
  if (deflate) v -= (*deflate) * deflate->dot(v);
  v /= v.norm();
  double sigma = 0.0, prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    VecXc w = inv(inv_adj(v));
    if (deflate) w -= (*deflate) * deflate->dot(w);
    double growth = w.norm();
    if (!(growth > 0.0) || !std::isfinite(growth))
      throw SpectrumProximityError("inverse power iteration hit an exactly singular solve", 0.0);
    sigma = 1.0 / std::sqrt(growth);
    v = w / growth;
    if (prev >= 0.0 && std::abs(sigma - prev) <= rel_tol * std::max(sigma, 1e-300)) break;
    prev = sigma;
  }
  return {sigma, v};
}

}  // namespace

double smallest_singular(const SolvePair& B, const VecXd& w_out, const VecXd& w_in,
                         double rel_tol, int max_iter) {
  return smallest_singular_deflated(B, w_out, w_in, nullptr, rel_tol, max_iter).first;
}

std::pair<double, double> two_smallest_singulars(const SolvePair& B, const VecXd& w_out,
                                                 const VecXd& w_in, double rel_tol,
                                                 int max_iter) {
  auto [s1, v1] = smallest_singular_deflated(B, w_out, w_in, nullptr, rel_tol, max_iter);
  auto [s2, v2] = smallest_singular_deflated(B, w_out, w_in, &v1, rel_tol, max_iter);
  (void)v2;
  return {s1, s2};
}

double smallest_generalized_singular(const RealPencilOps& ops, const VecXd& w_out,
                                     double rel_tol, int max_iter) {
  const int n = ops.dim;
  std::mt19937 rng(0xabcdu);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VecXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  v /= v.norm();
  // power iteration on K^{-1} M_in, K = B^T W_out B;  lambda_min(K, M_in) = 1/growth
  double lam = 0.0, prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    VecXd m = ops.metric_in(v);
    VecXd w = ops.solve((ops.solve_transpose(m).array() / w_out.array()).matrix());
    // Rayleigh quotient of the pencil at the current iterate
    VecXd bw = ops.apply(w);
    double num = (bw.array().square() * w_out.array()).sum();
    double den = w.dot(ops.metric_in(w));
    if (!(den > 0.0) || !std::isfinite(num))
      throw SpectrumProximityError("generalized singular value iteration broke down", 0.0);
    lam = num / den;
    v = w / w.norm();
    if (prev >= 0.0 && std::abs(lam - prev) <= rel_tol * std::max(lam, 1e-300)) break;
    prev = lam;
  }
  return std::sqrt(lam);
}

double smallest_generalized_singular(const ComplexPencilOps& ops, const VecXd& w_out,
                                     double rel_tol, int max_iter) {
  VecXc v = deterministic_start(ops.dim);
  double lam = 0.0, prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    VecXc m = ops.metric_in(v);
    VecXc w = ops.solve((ops.solve_adjoint(m).array() / w_out.array().cast<Complex>()).matrix());
    VecXc bw = ops.apply(w);
    double num = (bw.array().abs2() * w_out.array()).sum();
    double den = std::real(w.dot(ops.metric_in(w)));
    if (!(den > 0.0) || !std::isfinite(num))
      throw SpectrumProximityError("generalized singular value iteration broke down", 0.0);
    lam = num / den;
    v = w / w.norm();
    if (prev >= 0.0 && std::abs(lam - prev) <= rel_tol * std::max(lam, 1e-300)) break;
    prev = lam;
  }
  return std::sqrt(lam);
}

double smallest_generalized_singular_dense(const Eigen::MatrixXd& B, const VecXd& w_out,
                                           const Eigen::MatrixXd& metric_in) {
  Eigen::MatrixXd K = B.transpose() * w_out.asDiagonal() * B;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, metric_in,
                                                               Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  double lam = es.eigenvalues().minCoeff();
  return std::sqrt(std::max(lam, 0.0));
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace hopfkit

#include "hopfkit/example1.hpp"

#include <cmath>
#include <vector>

#include "hopfkit/conditions.hpp"
#include "hopfkit/errors.hpp"

namespace hopfkit {

void Example1Config::validate() const {
  if (L < 20.0) throw ConfigError("example1: L must be >= 20 (truncation below FD error)");
  if (nx < 200) throw ConfigError("example1: nx must be >= 200");
}

Example1Problem::Example1Problem(const Example1Config& cfg) : cfg_(cfg) {
  cfg.validate();
  nx_ = cfg.nx;
  h_ = 2.0 * cfg.L / (cfg.nx + 1);
  kappa_.resize(nx_);
  rho_.resize(nx_);
  for (int j = 0; j < nx_; ++j) {
    const double x = grid_x(j);
    kappa_[j] = 1.0 / std::cosh(0.5 * x);
    const double th = std::tanh(0.5 * x);
    rho_[j] = (2.0 * th * th - 1.0) / 4.0;
  }

  // composite trapezoidal quadrature with Dirichlet ends: weight h per node
  metric_ = VecXd::Constant(dim(), h_);

  // A = [[D2 - rho, -I], [I, D2 - rho]] in [c][j] layout
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(8 * nx_);
  const double ih2 = 1.0 / (h_ * h_);
  for (int j = 0; j < nx_; ++j) {
    for (int c = 0; c < 2; ++c) {
      const int r = c * nx_ + j;
      trip.emplace_back(r, r, -2.0 * ih2 - rho_[j]);
      if (j > 0) trip.emplace_back(r, r - 1, ih2);
      if (j + 1 < nx_) trip.emplace_back(r, r + 1, ih2);
    }
    trip.emplace_back(j, nx_ + j, -1.0);  // phi row: -psi
    trip.emplace_back(nx_ + j, j, 1.0);   // psi row: +phi
  }
  A_.resize(dim(), dim());
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();

  // f0_lambda_u = multiplication by kappa^2 on both components
  std::vector<Eigen::Triplet<double>> ftrip;
  ftrip.reserve(dim());
  for (int j = 0; j < nx_; ++j) {
    const double k2 = kappa_[j] * kappa_[j];
    ftrip.emplace_back(j, j, k2);
    ftrip.emplace_back(nx_ + j, nx_ + j, k2);
  }
  f_lambda_u_.resize(dim(), dim());
  f_lambda_u_.setFromTriplets(ftrip.begin(), ftrip.end());
  f_lambda_u_.makeCompressed();

  psi_star_initial_.resize(dim());
  for (int j = 0; j < nx_; ++j) {
    psi_star_initial_[j] = kappa_[j];
    psi_star_initial_[nx_ + j] = Complex(0.0, -kappa_[j]);
  }
  psi_star_ = psi_star_initial_;
  // analytic norm: ||(kappa, -i kappa)||_V^2 = 2 int sech^2(x/2) dx = 8
  psi_star_norm_target_ = std::sqrt(8.0);
}

SpatialVector Example1Problem::h_eval(double lambda, const SpatialVector& s) const {
  SpatialVector out(dim());
  for (int j = 0; j < nx_; ++j) {
    const double u = s[j], v = s[nx_ + j];
    const double bracket = lambda * kappa_[j] * kappa_[j] - u * u - v * v;
    out[j] = u * bracket;
    out[nx_ + j] = v * bracket;
  }
  return out;
}

SpatialVector Example1Problem::h_u_apply(double lambda, const SpatialVector& s,
                                         const SpatialVector& w) const {
  SpatialVector out(dim());
  for (int j = 0; j < nx_; ++j) {
    const double u = s[j], v = s[nx_ + j];
    const double du = w[j], dv = w[nx_ + j];
    const double bracket = lambda * kappa_[j] * kappa_[j] - u * u - v * v;
    out[j] = (bracket - 2.0 * u * u) * du - 2.0 * u * v * dv;
    out[nx_ + j] = -2.0 * u * v * du + (bracket - 2.0 * v * v) * dv;
  }
  return out;
}

SpatialVector Example1Problem::h_lambda_eval(double, const SpatialVector& s) const {
  SpatialVector out(dim());
  for (int j = 0; j < nx_; ++j) {
    const double k2 = kappa_[j] * kappa_[j];
    out[j] = k2 * s[j];
    out[nx_ + j] = k2 * s[nx_ + j];
  }
  return out;
}

std::unique_ptr<Example1Problem> ex1_build(const Example1Config& cfg) {
  auto P = std::make_unique<Example1Problem>(cfg);
  auto [mu, psi] = find_critical_eigenpair(*P);
  (void)mu;
  P->set_psi_star(psi);
  P->set_psi_sharp(psi);
  return P;
}

}  // namespace hopfkit

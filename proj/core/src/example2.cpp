#include "hopfkit/example2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hopfkit/conditions.hpp"
#include "hopfkit/errors.hpp"

namespace hopfkit {

void Example2Config::validate() const {
  if (nx < 8) throw ConfigError("example2: nx must be >= 8");
}

Example2Problem::Example2Problem(const Example2Config& cfg) : cfg_(cfg) {
  cfg.validate();
  nx_ = cfg.nx;
  mgrid_ = 3 * nx_ + 1;

  metric_.resize(dim());
  for (int j = 0; j < nx_; ++j) {
    const double n = j + 1;
    metric_[j] = 0.5 * M_PI * n * n;  // ||sum u_n sin nx||_{H10}^2 = (pi/2) sum n^2 u_n^2
    metric_[nx_ + j] = 0.5 * M_PI;
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * nx_);
  for (int j = 0; j < nx_; ++j) {
    const double n = j + 1;
    trip.emplace_back(j, j, -1.0);
    trip.emplace_back(j, nx_ + j, 1.0);
    trip.emplace_back(nx_ + j, j, -2.0);
    trip.emplace_back(nx_ + j, nx_ + j, 2.0 - n * n);
  }
  A_.resize(dim(), dim());
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();

  // f0_lambda_u: (u, v) -> (0, sin^2 x * u); exact in the sine basis:
  // sin^2 x sin(mx) = sin(mx)/2 - sin((m+2)x)/4 - sin((m-2)x)/4,
  // with sin((m-2)x) = -sin((2-m)x) folding back for m = 1.
  std::vector<Eigen::Triplet<double>> ftrip;
  for (int col = 0; col < nx_; ++col) {
    const int m = col + 1;
    auto add = [&](int mode, double w) {
      if (mode >= 1 && mode <= nx_) ftrip.emplace_back(nx_ + (mode - 1), col, w);
    };
    add(m, 0.5);
    add(m + 2, -0.25);
    if (m - 2 >= 1)
      add(m - 2, -0.25);
    else if (m == 1)
      add(1, 0.25);  // sin(-x) = -sin x
  }
  f_lambda_u_.resize(dim(), dim());
  f_lambda_u_.setFromTriplets(ftrip.begin(), ftrip.end());
  f_lambda_u_.makeCompressed();

  sin_table_.resize(mgrid_ - 1, nx_);
  sin2_.resize(mgrid_ - 1);
  for (int p = 0; p < mgrid_ - 1; ++p) {
    const double x = M_PI * (p + 1) / mgrid_;
    const double sx = std::sin(x);
    sin2_[p] = sx * sx;
    for (int j = 0; j < nx_; ++j) sin_table_(p, j) = std::sin((j + 1) * x);
  }

  psi_star_initial_ = SpatialVectorC::Zero(dim());
  psi_star_initial_[0] = 1.0;                 // u: sin x
  psi_star_initial_[nx_] = Complex(1.0, 1.0);  // v: (1+i) sin x
  psi_star_ = psi_star_initial_;
  psi_sharp_ = SpatialVectorC::Zero(dim());
  psi_sharp_[0] = Complex(1.0, 1.0);
  psi_sharp_[nx_] = 1.0;
  // ||(sin x, (1+i) sin x)||_V^2 = pi/2 + 2 (pi/2) = 3 pi / 2
  psi_star_norm_target_ = std::sqrt(1.5 * M_PI);
}

VecXd Example2Problem::synthesize(const Eigen::Map<const VecXd>& modes) const {
  return sin_table_ * modes;
}

VecXd Example2Problem::project(const VecXd& values) const {
  // DST with weight 2/m is exact for sine polynomials of degree <= m - 1
  return (2.0 / mgrid_) * (sin_table_.transpose() * values);
}

SpatialVector Example2Problem::h_eval(double lambda, const SpatialVector& s) const {
  VecXd u = sin_table_ * s.head(nx_);
  VecXd v = sin_table_ * s.tail(nx_);
  VecXd w = u.array() * (lambda * sin2_.array() - 2.0 * u.array().square() +
                         2.0 * u.array() * v.array() - v.array().square());
  SpatialVector out = SpatialVector::Zero(dim());
  out.tail(nx_) = project(w);
  return out;
}

SpatialVector Example2Problem::h_u_apply(double lambda, const SpatialVector& s,
                                         const SpatialVector& dir) const {
  VecXd u = sin_table_ * s.head(nx_);
  VecXd v = sin_table_ * s.tail(nx_);
  VecXd du = sin_table_ * dir.head(nx_);
  VecXd dv = sin_table_ * dir.tail(nx_);
  VecXd w = (lambda * sin2_.array() - 6.0 * u.array().square() +
             4.0 * u.array() * v.array() - v.array().square()) *
                du.array() +
            (2.0 * u.array().square() - 2.0 * u.array() * v.array()) * dv.array();
  SpatialVector out = SpatialVector::Zero(dim());
  out.tail(nx_) = project(w);
  return out;
}

SpatialVector Example2Problem::h_lambda_eval(double, const SpatialVector& s) const {
  VecXd u = sin_table_ * s.head(nx_);
  SpatialVector out = SpatialVector::Zero(dim());
  out.tail(nx_) = project((sin2_.array() * u.array()).matrix());
  return out;
}

namespace {

// Per-mode 2x2 solves with (z - A_n), A_n = [[-1, 1], [-2, 2 - n^2]].
class ModewiseShifted : public ShiftedOperator {
 public:
  ModewiseShifted(Complex z, int nx) : z_(z), nx_(nx) {
    inv00_.resize(nx);
    inv01_.resize(nx);
    inv10_.resize(nx);
    inv11_.resize(nx);
    sigma_min_ = std::numeric_limits<double>::infinity();
    scale_ = 0.0;
    for (int j = 0; j < nx; ++j) {
      const double n = j + 1;
      const Complex a = z + 1.0, b = -1.0, c = 2.0, d = z - 2.0 + n * n;
      const Complex det = a * d - b * c;
      // V-metric singular values via the diag(n, 1)-scaled block
      Eigen::Matrix2cd S;
      S << a, n * b, c / n, d;
      Eigen::JacobiSVD<Eigen::Matrix2cd> svd(S);
      sigma_min_ = std::min(sigma_min_, svd.singularValues()(1));
      scale_ = std::max(scale_, svd.singularValues()(0));
      inv00_[j] = d / det;
      inv01_[j] = -b / det;
      inv10_[j] = -c / det;
      inv11_[j] = a / det;
    }
  }

  SpatialVectorC solve(const SpatialVectorC& rhs) const override {
    SpatialVectorC out(2 * nx_);
    for (int j = 0; j < nx_; ++j) {
      out[j] = inv00_[j] * rhs[j] + inv01_[j] * rhs[nx_ + j];
      out[nx_ + j] = inv10_[j] * rhs[j] + inv11_[j] * rhs[nx_ + j];
    }
    return out;
  }

  SpatialVectorC solve_adjoint(const SpatialVectorC& rhs) const override {
    // inverse of the conjugate transpose = conjugate transpose of the inverse
    SpatialVectorC out(2 * nx_);
    for (int j = 0; j < nx_; ++j) {
      out[j] = std::conj(inv00_[j]) * rhs[j] + std::conj(inv10_[j]) * rhs[nx_ + j];
      out[nx_ + j] = std::conj(inv01_[j]) * rhs[j] + std::conj(inv11_[j]) * rhs[nx_ + j];
    }
    return out;
  }

  double sigma_min_estimate() const override { return sigma_min_; }
  double scale() const override { return scale_; }

 private:
  Complex z_;
  int nx_;
  double sigma_min_, scale_;
  std::vector<Complex> inv00_, inv01_, inv10_, inv11_;
};

}  // namespace

std::unique_ptr<ShiftedOperator> Example2Problem::shifted(Complex z) const {
  return std::make_unique<ModewiseShifted>(z, nx_);
}

std::vector<double> Example2Problem::shifted_singular_values(Complex z, int count) const {
  std::vector<double> sv;
  sv.reserve(2 * nx_);
  for (int j = 0; j < nx_; ++j) {
    const double n = j + 1;
    Eigen::Matrix2cd S;
    S << z + 1.0, -n, 2.0 / n, z - 2.0 + n * n;
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(S);
    sv.push_back(svd.singularValues()(0));
    sv.push_back(svd.singularValues()(1));
  }
  std::sort(sv.begin(), sv.end());
  sv.resize(std::min<size_t>(count, sv.size()));
  return sv;
}

std::unique_ptr<Example2Problem> ex2_build(const Example2Config& cfg) {
  auto P = std::make_unique<Example2Problem>(cfg);
  auto [mu, psi] = find_critical_eigenpair(*P);
  (void)mu;
  P->set_psi_star(psi);
  return P;
}

}  // namespace hopfkit

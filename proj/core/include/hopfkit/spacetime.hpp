#ifndef HOPFKIT_SPACETIME_HPP
#define HOPFKIT_SPACETIME_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hopfkit/linalg.hpp"

namespace hopfkit {

// Spatial coefficient vectors hold both PDE components back to back in
// [c][j] order (component-major), so their length is 2*nx. Complex vectors
// live in V_c / U_c; they carry psi_star, psi_sharp, d and the temporal
// Fourier coefficients p_n, q_n.
using SpatialVector = Eigen::VectorXd;
using SpatialVectorC = Eigen::VectorXcd;

/// Real 2pi-periodic two-component space-time field stored as a temporal
/// trigonometric series over a spatial basis:
///   u(t) = a_0 + sum_{n=1..nt} a_n cos(nt) + b_n sin(nt),
/// with each coefficient a SpatialVector. Periodicity is structural; there is
/// no sine coefficient for n = 0.
class SpaceTimeField {
 public:
  static constexpr int kComponents = 2;

  SpaceTimeField() = default;
  SpaceTimeField(int nt, int nx);

  int nt() const { return nt_; }
  int nx() const { return nx_; }
  int dim() const { return kComponents * nx_; }

  const SpatialVector& cos_coeff(int n) const;
  const SpatialVector& sin_coeff(int n) const;  // n >= 1
  SpatialVector& cos_coeff(int n);
  SpatialVector& sin_coeff(int n);

  /// Pointwise evaluation u(t) as a spatial vector.
  SpatialVector sample(double t) const;

  bool all_finite() const;
  bool same_shape(const SpaceTimeField& o) const { return nt_ == o.nt_ && nx_ == o.nx_; }

  SpaceTimeField& operator+=(const SpaceTimeField& o);
  SpaceTimeField& operator-=(const SpaceTimeField& o);
  SpaceTimeField& operator*=(double s);
  friend SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
  friend SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
  friend SpaceTimeField operator*(double s, SpaceTimeField a) { return a *= s; }

  /// Squared Euclidean coefficient norm of temporal mode n.
  double mode_energy(int n) const;
  /// Parseval-style coefficient seminorm with (1+n^2) temporal weights; used
  /// for relative mode-purity checks where no problem metric is available.
  double sobolev_seminorm() const;
  double max_abs() const;

 private:
  int nt_ = 0, nx_ = 0;
  std::vector<SpatialVector> a_;  // modes 0..nt
  std::vector<SpatialVector> b_;  // modes 1..nt, stored at n-1
};

struct FrequencySplit {
  SpaceTimeField low0;  // mode 0 only
  SpaceTimeField low1;  // mode 1 only
  SpaceTimeField high;  // modes >= 2
};

/// n-th temporal Fourier coefficient u_hat(n) = (1/2pi) int e^{-int} u(t) dt,
/// read off the trigonometric coefficients exactly:
///   u_hat(0) = a_0, u_hat(n) = (a_n - i b_n)/2, u_hat(-n) = conj(u_hat(n)).
SpatialVectorC fourier_coefficient(const SpaceTimeField& u, int n);

/// Three-way frequency split into modes {0}, {1}, {|n| >= 2}.
FrequencySplit split_frequencies(const SpaceTimeField& u);

/// L1 psi = Re(psi (x) e_1): for psi = a + ib the mode-1 cosine coefficient is
/// a and the sine coefficient is -b. Bijective onto the mode-1 subspace.
SpaceTimeField l1_embed(const SpatialVectorC& psi, int nt);

/// Inverse of l1_embed on mode-1 fields. Content outside mode 1 above
/// tol_mode (relative to the field's Sobolev seminorm) is a domain error.
SpatialVectorC l1_inverse(const SpaceTimeField& u, double tol_mode = 1e-9);

/// Time translation (tau_theta u)(t) = u(t - theta); exact mode-wise rotation.
SpaceTimeField translate(const SpaceTimeField& u, double theta);

/// Temporal derivative: a_n cos + b_n sin -> n b_n cos - n a_n sin.
SpaceTimeField time_derivative(const SpaceTimeField& u);

/// Builds a field with a single temporal mode populated.
SpaceTimeField field_from_mode(int nt, int n, const SpatialVector& cosine,
                               const SpatialVector& sine);

/// Collocation grid of 2nt+1 equispaced times with exact projection back onto
/// modes 0..nt (trigonometric interpolation). Used to push pointwise
/// nonlinearities through the temporal representation.
class TemporalCollocation {
 public:
  explicit TemporalCollocation(int nt);
  int points() const { return m_; }
  double time(int i) const { return times_[i]; }
  /// samples[i] = f(t_i) as spatial vectors -> projected field.
  SpaceTimeField project(const std::vector<SpatialVector>& samples, int nx) const;

 private:
  int nt_, m_;
  std::vector<double> times_;
  Eigen::MatrixXd cos_table_, sin_table_;  // (mode, point)
};

}  // namespace hopfkit

#endif

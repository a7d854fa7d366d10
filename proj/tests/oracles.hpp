// Test-side oracles, independent of the library's solve paths:
// quadrature, dense eigensolves of small blocks, and the w = phi +- i psi
// change of variables that diagonalizes the example1 operator over the
// spectrum of the scalar Schroedinger part.
#ifndef HOPFKIT_TESTS_ORACLES_HPP
#define HOPFKIT_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "hopfkit/example1.hpp"
#include "hopfkit/spacetime.hpp"

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Eigenvalues of the symmetric tridiagonal L = D2 - diag(rho) from example1.
/// The unitary change w = (phi +- i psi)/sqrt(2) turns A into
/// diag(L + i, L - i), so every singular value of (z - A_c) is
/// min over e in spec(L) of |z -+ i - e|.
inline Eigen::VectorXd example1_schroedinger_spectrum(const hopfkit::Example1Problem& P) {
  const int nx = P.nx();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nx, nx);
  const double ih2 = 1.0 / (P.grid_h() * P.grid_h());
  for (int j = 0; j < nx; ++j) {
    L(j, j) = -2.0 * ih2 - P.rho()[j];
    if (j > 0) L(j, j - 1) = ih2;
    if (j + 1 < nx) L(j, j + 1) = ih2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double example1_sigma_min(const Eigen::VectorXd& spec_L, std::complex<double> z) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec_L.size(); ++i) {
    best = std::min(best, std::abs(z - std::complex<double>(spec_L[i], 1.0)));
    best = std::min(best, std::abs(z - std::complex<double>(spec_L[i], -1.0)));
  }
  return best;
}

/// Trapezoidal time-sampled Y-norm, the quadrature side of the Parseval check.
inline double norm_Y_sampled(const hopfkit::EvolutionProblem& P,
                             const hopfkit::SpaceTimeField& u, int samples = 4096) {
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * M_PI * i / samples;
    hopfkit::SpatialVector s = u.sample(t);
    acc += P.inner_V(s, s);
  }
  return std::sqrt(acc * 2.0 * M_PI / samples);
}

inline hopfkit::SpaceTimeField random_field(int nt, int nx, unsigned seed,
                                            int mode_lo = 0, int mode_hi = -1) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  hopfkit::SpaceTimeField u(nt, nx);
  if (mode_hi < 0) mode_hi = nt;
  for (int n = mode_lo; n <= mode_hi; ++n) {
    for (int i = 0; i < u.dim(); ++i) {
      u.cos_coeff(n)[i] = dist(rng);
      if (n >= 1) u.sin_coeff(n)[i] = dist(rng);
    }
  }
  return u;
}

inline Eigen::VectorXcd random_complex_vec(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(dist(rng), dist(rng));
  return v;
}

}  // namespace oracles

#endif

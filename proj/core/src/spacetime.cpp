#include "hopfkit/spacetime.hpp"

#include <cmath>
#include <sstream>

#include "hopfkit/errors.hpp"

namespace hopfkit {

SpaceTimeField::SpaceTimeField(int nt, int nx) : nt_(nt), nx_(nx) {
  if (nt < 1 || nx < 1) throw ConfigError("SpaceTimeField needs nt >= 1 and nx >= 1");
  a_.assign(nt + 1, SpatialVector::Zero(dim()));
  b_.assign(nt, SpatialVector::Zero(dim()));
}

const SpatialVector& SpaceTimeField::cos_coeff(int n) const {
  if (n < 0 || n > nt_) throw std::out_of_range("cosine mode out of range");
  return a_[n];
}

const SpatialVector& SpaceTimeField::sin_coeff(int n) const {
  if (n < 1 || n > nt_) throw std::out_of_range("sine mode out of range (no sine for n=0)");
  return b_[n - 1];
}

SpatialVector& SpaceTimeField::cos_coeff(int n) {
  if (n < 0 || n > nt_) throw std::out_of_range("cosine mode out of range");
  return a_[n];
}

SpatialVector& SpaceTimeField::sin_coeff(int n) {
  if (n < 1 || n > nt_) throw std::out_of_range("sine mode out of range (no sine for n=0)");
  return b_[n - 1];
}

SpatialVector SpaceTimeField::sample(double t) const {
  SpatialVector out = a_[0];
  for (int n = 1; n <= nt_; ++n)
    out += std::cos(n * t) * a_[n] + std::sin(n * t) * b_[n - 1];
  return out;
}

bool SpaceTimeField::all_finite() const {
  for (const auto& v : a_)
    if (!v.allFinite()) return false;
  for (const auto& v : b_)
    if (!v.allFinite()) return false;
  return true;
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& o) {
  for (int n = 0; n <= nt_; ++n) a_[n] += o.a_[n];
  for (int n = 0; n < nt_; ++n) b_[n] += o.b_[n];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& o) {
  for (int n = 0; n <= nt_; ++n) a_[n] -= o.a_[n];
  for (int n = 0; n < nt_; ++n) b_[n] -= o.b_[n];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(double s) {
  for (auto& v : a_) v *= s;
  for (auto& v : b_) v *= s;
  return *this;
}

double SpaceTimeField::mode_energy(int n) const {
  double e = a_[n].squaredNorm();
  if (n >= 1) e += b_[n - 1].squaredNorm();
  return e;
}

double SpaceTimeField::sobolev_seminorm() const {
  double s = 0.0;
  for (int n = 0; n <= nt_; ++n) s += (1.0 + double(n) * n) * mode_energy(n);
  return std::sqrt(s);
}

double SpaceTimeField::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, v.cwiseAbs().maxCoeff());
  for (const auto& v : b_) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

SpatialVectorC fourier_coefficient(const SpaceTimeField& u, int n) {
  int an = std::abs(n);
  if (an > u.nt()) throw std::out_of_range("fourier_coefficient: |n| exceeds nt");
  if (an == 0) return u.cos_coeff(0).cast<Complex>();
  SpatialVectorC uh = 0.5 * (u.cos_coeff(an).cast<Complex>() -
                             Complex(0, 1) * u.sin_coeff(an).cast<Complex>());
  return n > 0 ? uh : uh.conjugate().eval();
}

FrequencySplit split_frequencies(const SpaceTimeField& u) {
  FrequencySplit s{SpaceTimeField(u.nt(), u.nx()), SpaceTimeField(u.nt(), u.nx()),
                   SpaceTimeField(u.nt(), u.nx())};
  s.low0.cos_coeff(0) = u.cos_coeff(0);
  s.low1.cos_coeff(1) = u.cos_coeff(1);
  s.low1.sin_coeff(1) = u.sin_coeff(1);
  for (int n = 2; n <= u.nt(); ++n) {
    s.high.cos_coeff(n) = u.cos_coeff(n);
    s.high.sin_coeff(n) = u.sin_coeff(n);
  }
  return s;
}

SpaceTimeField l1_embed(const SpatialVectorC& psi, int nt) {
  SpaceTimeField u(nt, static_cast<int>(psi.size()) / SpaceTimeField::kComponents);
  u.cos_coeff(1) = psi.real();
  u.sin_coeff(1) = -psi.imag();
  return u;
}

SpatialVectorC l1_inverse(const SpaceTimeField& u, double tol_mode) {
  double total = u.sobolev_seminorm();
  double off = 0.0;
  for (int n = 0; n <= u.nt(); ++n) {
    if (n == 1) continue;
    off += (1.0 + double(n) * n) * u.mode_energy(n);
  }
  off = std::sqrt(off);
  if (off > tol_mode * std::max(total, 1e-300)) {
    std::ostringstream msg;
    msg << "l1_inverse: field has non-mode-1 energy " << off << " (relative "
        << off / std::max(total, 1e-300) << ")";
    throw std::domain_error(msg.str());
  }
  return u.cos_coeff(1).cast<Complex>() - Complex(0, 1) * u.sin_coeff(1).cast<Complex>();
}

SpaceTimeField translate(const SpaceTimeField& u, double theta) {
  SpaceTimeField out(u.nt(), u.nx());
  out.cos_coeff(0) = u.cos_coeff(0);
  for (int n = 1; n <= u.nt(); ++n) {
    const double c = std::cos(n * theta), s = std::sin(n * theta);
    // u(t - theta): a' = a cos - b sin, b' = a sin + b cos
    out.cos_coeff(n) = c * u.cos_coeff(n) - s * u.sin_coeff(n);
    out.sin_coeff(n) = s * u.cos_coeff(n) + c * u.sin_coeff(n);
  }
  return out;
}

SpaceTimeField time_derivative(const SpaceTimeField& u) {
  SpaceTimeField out(u.nt(), u.nx());
  for (int n = 1; n <= u.nt(); ++n) {
    out.cos_coeff(n) = double(n) * u.sin_coeff(n);
    out.sin_coeff(n) = -double(n) * u.cos_coeff(n);
  }
  return out;
}

SpaceTimeField field_from_mode(int nt, int n, const SpatialVector& cosine,
                               const SpatialVector& sine) {
  SpaceTimeField u(nt, static_cast<int>(cosine.size()) / SpaceTimeField::kComponents);
  u.cos_coeff(n) = cosine;
  if (n >= 1) u.sin_coeff(n) = sine;
  return u;
}

TemporalCollocation::TemporalCollocation(int nt) : nt_(nt), m_(2 * nt + 1) {
  times_.resize(m_);
  cos_table_.resize(nt + 1, m_);
  sin_table_.resize(nt + 1, m_);
  for (int i = 0; i < m_; ++i) {
    times_[i] = 2.0 * M_PI * i / m_;
    for (int n = 0; n <= nt; ++n) {
      cos_table_(n, i) = std::cos(n * times_[i]);
      sin_table_(n, i) = std::sin(n * times_[i]);
    }
  }
}

SpaceTimeField TemporalCollocation::project(const std::vector<SpatialVector>& samples,
                                            int nx) const {
  SpaceTimeField out(nt_, nx);
  const double w0 = 1.0 / m_, w = 2.0 / m_;
  for (int i = 0; i < m_; ++i) {
    out.cos_coeff(0) += w0 * samples[i];
    for (int n = 1; n <= nt_; ++n) {
      out.cos_coeff(n) += w * cos_table_(n, i) * samples[i];
      out.sin_coeff(n) += w * sin_table_(n, i) * samples[i];
    }
  }
  return out;
}

}  // namespace hopfkit

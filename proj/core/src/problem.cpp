#include "hopfkit/problem.hpp"

#include <Eigen/SparseLU>
#include <sstream>

#include "hopfkit/errors.hpp"

namespace hopfkit {

namespace {

// Generic factorization of (z - A_c) via sparse LU of the complexified matrix
// and, lazily, of its conjugate transpose.
class SparseShiftedOperator : public ShiftedOperator {
 public:
  SparseShiftedOperator(const SparseMat& A, const VecXd& metric, Complex z) : z_(z) {
    SparseMatC I(A.rows(), A.cols());
    I.setIdentity();
    SparseMatC M = (z * I - A.cast<Complex>()).eval();
    M.makeCompressed();
    lu_.compute(M);
    if (lu_.info() != Eigen::Success)
      throw SpectrumProximityError("shifted operator factorization failed", z);
    SparseMatC Mh = M.adjoint();
    Mh.makeCompressed();
    lu_adj_.compute(Mh);
    if (lu_adj_.info() != Eigen::Success)
      throw SpectrumProximityError("adjoint shifted factorization failed", z);
    scale_ = 0.0;
    for (int k = 0; k < M.outerSize(); ++k)
      for (SparseMatC::InnerIterator it(M, k); it; ++it) scale_ = std::max(scale_, std::abs(it.value()));
    w_sqrt_ = metric.cwiseSqrt();
  }

  SpatialVectorC solve(const SpatialVectorC& rhs) const override { return lu_.solve(rhs); }
  SpatialVectorC solve_adjoint(const SpatialVectorC& rhs) const override { return lu_adj_.solve(rhs); }

  double sigma_min_estimate() const override {
    // a few inverse power steps on the normal equations, in the V metric
    SolvePair sp{[this](const VecXc& b) { return solve(b); },
                 [this](const VecXc& b) { return solve_adjoint(b); },
                 static_cast<int>(w_sqrt_.size())};
    VecXd w = w_sqrt_.cwiseProduct(w_sqrt_);
    return smallest_singular(sp, w, w, 1e-3, 12);
  }
  double scale() const override { return scale_; }

 private:
  Complex z_;
  double scale_;
  VecXd w_sqrt_;
  Eigen::SparseLU<SparseMatC> lu_, lu_adj_;
};

}  // namespace

SpatialVectorC EvolutionProblem::apply_A_c(const SpatialVectorC& x) const {
  SpatialVectorC out(x.size());
  out.real() = A_ * x.real();
  out.imag() = A_ * x.imag();
  return out;
}

SpatialVectorC EvolutionProblem::h_lambda_u_apply(const SpatialVectorC& dir) const {
  SpatialVectorC out(dir.size());
  out.real() = f_lambda_u_ * dir.real();
  out.imag() = f_lambda_u_ * dir.imag();
  return out;
}

std::unique_ptr<ShiftedOperator> EvolutionProblem::shifted(Complex z) const {
  return std::make_unique<SparseShiftedOperator>(A_, metric_, z);
}

std::vector<double> EvolutionProblem::shifted_singular_values(Complex z, int count) const {
  auto op = shifted(z);
  SolvePair sp{[&](const VecXc& b) { return op->solve(b); },
               [&](const VecXc& b) { return op->solve_adjoint(b); }, dim()};
  if (count <= 1) return {smallest_singular(sp, metric_, metric_)};
  auto [s1, s2] = two_smallest_singulars(sp, metric_, metric_);
  return {s1, s2};
}

Complex EvolutionProblem::inner_V(const SpatialVectorC& x, const SpatialVectorC& y) const {
  // conjugate-linear in the second argument
  return (x.array() * y.conjugate().array() * metric_.array().cast<Complex>()).sum();
}

Complex EvolutionProblem::inner_U(const SpatialVectorC& x, const SpatialVectorC& y) const {
  return inner_V(apply_A_c(x), apply_A_c(y));
}

double EvolutionProblem::inner_V(const SpatialVector& x, const SpatialVector& y) const {
  return (metric_.array() * x.array() * y.array()).sum();
}

double EvolutionProblem::inner_U(const SpatialVector& x, const SpatialVector& y) const {
  return inner_V(apply_A(x), apply_A(y));
}

const SpatialVector& EvolutionProblem::bordering() const {
  if (bordering_.size() == 0)
    throw DegeneracyError("bordering vector not prepared; call prepare_bordering first");
  return bordering_;
}

SpatialVectorC resolvent_solve(const EvolutionProblem& P, Complex z, const SpatialVectorC& rhs) {
  auto op = P.shifted(z);
  double smin = op->sigma_min_estimate();
  if (smin < 1e-13 * op->scale()) {
    std::ostringstream msg;
    msg << "resolvent_solve: z = (" << z.real() << ", " << z.imag()
        << ") is within " << smin << " of the discrete spectrum";
    throw SpectrumProximityError(msg.str(), z);
  }
  return op->solve(rhs);
}

SpaceTimeField apply_matrix_field(const SparseMat& mat, const SpaceTimeField& u) {
  SpaceTimeField out(u.nt(), u.nx());
  out.cos_coeff(0) = mat * u.cos_coeff(0);
  for (int n = 1; n <= u.nt(); ++n) {
    out.cos_coeff(n) = mat * u.cos_coeff(n);
    out.sin_coeff(n) = mat * u.sin_coeff(n);
  }
  return out;
}

SpaceTimeField apply_A_field(const EvolutionProblem& P, const SpaceTimeField& u) {
  SpaceTimeField out(u.nt(), u.nx());
  out.cos_coeff(0) = P.apply_A(u.cos_coeff(0));
  for (int n = 1; n <= u.nt(); ++n) {
    out.cos_coeff(n) = P.apply_A(u.cos_coeff(n));
    out.sin_coeff(n) = P.apply_A(u.sin_coeff(n));
  }
  return out;
}

SpaceTimeField apply_T1(const EvolutionProblem& P, const SpaceTimeField& w, double tol_mode) {
  double total = w.sobolev_seminorm(), off = 0.0;
  for (int n = 0; n <= w.nt(); ++n)
    if (n != 1) off += (1.0 + double(n) * n) * w.mode_energy(n);
  off = std::sqrt(off);
  if (off > tol_mode * std::max(total, 1e-300))
    throw std::domain_error("apply_T1: input has non-mode-1 content");
  const SpatialVector& a = w.cos_coeff(1);
  const SpatialVector& b = w.sin_coeff(1);
  SpaceTimeField out(w.nt(), w.nx());
  out.cos_coeff(1) = b - P.apply_A(a);
  out.sin_coeff(1) = -(a + P.apply_A(b));
  return out;
}

std::pair<double, double> functional_l(const EvolutionProblem& P, const SpaceTimeField& u) {
  // orthogonality kills every mode but n = 1
  const SpatialVector& d = P.bordering();
  return {P.inner_U(d, u.cos_coeff(1)), P.inner_U(d, u.sin_coeff(1))};
}

namespace {

template <class PointwiseFn>
SpaceTimeField collocate(const EvolutionProblem& P, const SpaceTimeField& u, PointwiseFn&& fn) {
  TemporalCollocation grid(u.nt());
  std::vector<SpatialVector> samples(grid.points());
  for (int i = 0; i < grid.points(); ++i) samples[i] = fn(u.sample(grid.time(i)));
  SpaceTimeField out = grid.project(samples, u.nx());
  if (!out.all_finite()) throw NumericError(P.name() + ": nonlinearity produced non-finite values");
  return out;
}

}  // namespace

SpaceTimeField h_field(const EvolutionProblem& P, double lambda, const SpaceTimeField& u) {
  return collocate(P, u, [&](const SpatialVector& s) { return P.h_eval(lambda, s); });
}

SpaceTimeField h_u_field(const EvolutionProblem& P, double lambda, const SpaceTimeField& u,
                         const SpaceTimeField& w) {
  TemporalCollocation grid(u.nt());
  std::vector<SpatialVector> samples(grid.points());
  for (int i = 0; i < grid.points(); ++i)
    samples[i] = P.h_u_apply(lambda, u.sample(grid.time(i)), w.sample(grid.time(i)));
  SpaceTimeField out = grid.project(samples, u.nx());
  if (!out.all_finite()) throw NumericError(P.name() + ": h_u produced non-finite values");
  return out;
}

SpaceTimeField h_lambda_field(const EvolutionProblem& P, double lambda, const SpaceTimeField& u) {
  return collocate(P, u, [&](const SpatialVector& s) { return P.h_lambda_eval(lambda, s); });
}

double norm_Y(const EvolutionProblem& P, const SpaceTimeField& u) {
  double s = P.inner_V(u.cos_coeff(0), u.cos_coeff(0));
  for (int n = 1; n <= u.nt(); ++n)
    s += 0.5 * (P.inner_V(u.cos_coeff(n), u.cos_coeff(n)) +
                P.inner_V(u.sin_coeff(n), u.sin_coeff(n)));
  return std::sqrt(2.0 * M_PI * s);
}

double norm_X(const EvolutionProblem& P, const SpaceTimeField& u) {
  auto vsq = [&](const SpatialVector& x) { return P.inner_V(x, x); };
  auto usq = [&](const SpatialVector& x) { return P.inner_U(x, x); };
  double s = vsq(u.cos_coeff(0)) + usq(u.cos_coeff(0));
  for (int n = 1; n <= u.nt(); ++n) {
    double vpart = vsq(u.cos_coeff(n)) + vsq(u.sin_coeff(n));
    double upart = usq(u.cos_coeff(n)) + usq(u.sin_coeff(n));
    s += 0.5 * ((1.0 + double(n) * n) * vpart + upart);
  }
  return std::sqrt(2.0 * M_PI * s);
}

SpatialVector prepare_bordering(EvolutionProblem& P) {
  const SpatialVector re = P.psi_star().real();
  const SpatialVector im = P.psi_star().imag();
  const double g11 = P.inner_U(re, re);
  const double g12 = P.inner_U(re, im);
  const double g22 = P.inner_U(im, im);
  const double det = g11 * g22 - g12 * g12;
  const double scale = std::max({std::abs(g11), std::abs(g22), 1e-300});
  if (std::abs(det) < 1e-12 * scale * scale)
    throw DegeneracyError("prepare_bordering: Re psi_star, Im psi_star are (near) dependent in U");
  // d = x Re + y Im with (d, Re)_U = 1, (d, Im)_U = 0
  const double x = g22 / det, y = -g12 / det;
  SpatialVector d = x * re + y * im;
  P.set_bordering(d);
  return d;
}

}  // namespace hopfkit

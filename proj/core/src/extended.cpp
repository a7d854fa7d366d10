#include "hopfkit/extended.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "hopfkit/errors.hpp"

namespace hopfkit {

SpaceTimeField residual_g(const EvolutionProblem& P, const ExtendedState& s) {
  SpaceTimeField f = apply_A_field(P, s.u);
  f += h_field(P, s.lambda, s.u);
  f *= -(s.sigma + 1.0);
  return time_derivative(s.u) + f;
}

double HValue::norm(const EvolutionProblem& P) const {
  const double gy = norm_Y(P, gu);
  return std::sqrt(h1 * h1 + h2 * h2 + gy * gy);
}

HValue assemble_H(const EvolutionProblem& P, const ExtendedState& s) {
  auto [l1, l2] = functional_l(P, s.u);
  SpaceTimeField lin = apply_A_field(P, s.u);
  lin += s.lambda * apply_matrix_field(P.f_lambda_u_matrix(), s.u);
  lin *= -(s.sigma + 1.0);
  return HValue{l1 - 1.0, l2, time_derivative(s.u) + lin};
}

DHStar::DHStar(const EvolutionProblem& P, int nt) : P_(P), nt_(nt), u_star_(P.u_star(nt)) {
  col_lambda_ = -1.0 * apply_matrix_field(P.f_lambda_u_matrix(), u_star_);
  col_sigma_ = -1.0 * apply_A_field(P, u_star_);
}

DHStar::Value DHStar::apply(double lambda, double sigma, const SpaceTimeField& u) const {
  auto [l1, l2] = functional_l(P_, u);
  SpaceTimeField f = time_derivative(u) - apply_A_field(P_, u) + lambda * col_lambda_ +
                     sigma * col_sigma_;
  return {l1, l2, std::move(f)};
}

Eigen::MatrixXd DHStar::assemble_dense() const {
  const int d = P_.dim();
  const int nfield = (2 * nt_ + 1) * d;
  const int N = 2 + nfield;
  // coefficient ordering: mode 0, then (cos_n, sin_n) for n = 1..nt
  auto offs_cos = [&](int n) { return n == 0 ? 0 : d * (2 * n - 1); };
  auto offs_sin = [&](int n) { return d * (2 * n); };

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd Ad = Eigen::MatrixXd(P_.A_matrix());
  VecXd la = P_.A_matrix().transpose() *
             (P_.metric_diag().asDiagonal() * (P_.A_matrix() * P_.bordering()));

  auto put_col_field = [&](int col, const SpaceTimeField& f) {
    M.block(2 + offs_cos(0), col, d, 1) = f.cos_coeff(0);
    for (int n = 1; n <= nt_; ++n) {
      M.block(2 + offs_cos(n), col, d, 1) = f.cos_coeff(n);
      M.block(2 + offs_sin(n), col, d, 1) = f.sin_coeff(n);
    }
  };
  put_col_field(0, col_lambda_);
  put_col_field(1, col_sigma_);

  M.block(0, 2 + offs_cos(1), 1, d) = la.transpose();
  M.block(1, 2 + offs_sin(1), 1, d) = la.transpose();

  M.block(2 + offs_cos(0), 2 + offs_cos(0), d, d) = -Ad;
  for (int n = 1; n <= nt_; ++n) {
    M.block(2 + offs_cos(n), 2 + offs_cos(n), d, d) = -Ad;
    M.block(2 + offs_sin(n), 2 + offs_sin(n), d, d) = -Ad;
    M.block(2 + offs_cos(n), 2 + offs_sin(n), d, d) =
        double(n) * Eigen::MatrixXd::Identity(d, d);
    M.block(2 + offs_sin(n), 2 + offs_cos(n), d, d) =
        -double(n) * Eigen::MatrixXd::Identity(d, d);
  }
  return M;
}

DHStar jacobian_DH_star(const EvolutionProblem& P, int nt) { return DHStar(P, nt); }

// ---- ModewiseCoreSolver ----

struct ModewiseCoreSolver::Impl {
  Eigen::SparseLU<SparseMat> lu0, lu0t;
  bool lu0t_ready = false;
  std::vector<std::unique_ptr<Eigen::SparseLU<SparseMatC>>> lun, lunt;
};

ModewiseCoreSolver::ModewiseCoreSolver(const EvolutionProblem& P, int nt, double lambda,
                                       double s_factor, bool with_transpose)
    : P_(P), nt_(nt), s_(s_factor), impl_(std::make_shared<Impl>()) {
  B_ = P.A_matrix();
  if (lambda != 0.0) B_ = (B_ + lambda * P.f_lambda_u_matrix()).eval();
  B_.makeCompressed();

  SparseMat M0 = (-s_factor * B_).eval();
  M0.makeCompressed();
  impl_->lu0.compute(M0);
  if (impl_->lu0.info() != Eigen::Success)
    throw SpectrumProximityError("mode-0 core factorization failed", 0.0);
  if (with_transpose) {
    SparseMat M0t = SparseMat(M0.transpose());
    impl_->lu0t.compute(M0t);
    impl_->lu0t_ready = impl_->lu0t.info() == Eigen::Success;
  }

  SparseMatC I(B_.rows(), B_.cols());
  I.setIdentity();
  SparseMatC Bc = B_.cast<Complex>();
  impl_->lun.resize(nt);
  if (with_transpose) impl_->lunt.resize(nt);
  for (int n = 1; n <= nt; ++n) {
    SparseMatC M = (Complex(0.0, n) * I - s_factor * Bc).eval();
    M.makeCompressed();
    auto lu = std::make_unique<Eigen::SparseLU<SparseMatC>>();
    lu->compute(M);
    if (lu->info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "mode-" << n << " core factorization failed";
      throw SpectrumProximityError(msg.str(), Complex(0.0, n));
    }
    impl_->lun[n - 1] = std::move(lu);
    if (with_transpose) {
      SparseMatC Mh = M.adjoint();
      Mh.makeCompressed();
      auto luh = std::make_unique<Eigen::SparseLU<SparseMatC>>();
      luh->compute(Mh);
      if (luh->info() != Eigen::Success)
        throw SpectrumProximityError("adjoint core factorization failed", Complex(0.0, n));
      impl_->lunt[n - 1] = std::move(luh);
    }
  }
}

SpaceTimeField ModewiseCoreSolver::solve(const SpaceTimeField& rhs) const {
  SpaceTimeField out(rhs.nt(), rhs.nx());
  out.cos_coeff(0) = impl_->lu0.solve(rhs.cos_coeff(0));
  for (int n = 1; n <= nt_; ++n) {
    SpatialVectorC prhs(rhs.dim());
    prhs.real() = rhs.cos_coeff(n);
    prhs.imag() = -rhs.sin_coeff(n);
    SpatialVectorC x = impl_->lun[n - 1]->solve(prhs);
    out.cos_coeff(n) = x.real();
    out.sin_coeff(n) = -x.imag();
  }
  return out;
}

SpaceTimeField ModewiseCoreSolver::solve_transpose(const SpaceTimeField& rhs) const {
  if (!impl_->lu0t_ready || impl_->lunt.empty())
    throw ConfigError("ModewiseCoreSolver: transpose solves not prepared");
  SpaceTimeField out(rhs.nt(), rhs.nx());
  out.cos_coeff(0) = impl_->lu0t.solve(rhs.cos_coeff(0));
  for (int n = 1; n <= nt_; ++n) {
    // realified transpose of (in - sB) corresponds to its conjugate transpose
    // under the psi = a - ib packing
    SpatialVectorC prhs(rhs.dim());
    prhs.real() = rhs.cos_coeff(n);
    prhs.imag() = -rhs.sin_coeff(n);
    SpatialVectorC x = impl_->lunt[n - 1]->solve(prhs);
    out.cos_coeff(n) = x.real();
    out.sin_coeff(n) = -x.imag();
  }
  return out;
}

SpaceTimeField ModewiseCoreSolver::apply(const SpaceTimeField& u) const {
  SpaceTimeField out(u.nt(), u.nx());
  out.cos_coeff(0) = -s_ * (B_ * u.cos_coeff(0));
  for (int n = 1; n <= nt_; ++n) {
    out.cos_coeff(n) = double(n) * u.sin_coeff(n) - s_ * (B_ * u.cos_coeff(n));
    out.sin_coeff(n) = -double(n) * u.cos_coeff(n) - s_ * (B_ * u.sin_coeff(n));
  }
  return out;
}

BorderedSolution solve_bordered(const EvolutionProblem& P, const ModewiseCoreSolver& core,
                                const SpaceTimeField& col_l, const SpaceTimeField& col_s,
                                double r1, double r2, const SpaceTimeField& rY) {
  SpaceTimeField u0 = core.solve(rY);
  SpaceTimeField wl = core.solve(col_l);
  SpaceTimeField ws = core.solve(col_s);
  auto [l1u0, l2u0] = functional_l(P, u0);
  auto [l1wl, l2wl] = functional_l(P, wl);
  auto [l1ws, l2ws] = functional_l(P, ws);
  const double det = l1wl * l2ws - l1ws * l2wl;
  const double scale = std::max({std::abs(l1wl), std::abs(l2ws), std::abs(l1ws),
                                 std::abs(l2wl), 1e-300});
  if (std::abs(det) < 1e-14 * scale * scale)
    throw DegeneracyError("solve_bordered: singular 2x2 Schur complement");
  const double b1 = l1u0 - r1, b2 = l2u0 - r2;
  BorderedSolution sol;
  sol.dlambda = (b1 * l2ws - b2 * l1ws) / det;
  sol.dsigma = (l1wl * b2 - l2wl * b1) / det;
  sol.du = u0 - sol.dlambda * wl - sol.dsigma * ws;
  return sol;
}

// ---- isolatedness margin ----

namespace {

// sigma_min of the bordered mode-1 block in the given metrics.
// Dense route (exact, tolerates a singular block) below the size threshold,
// sparse bordered inverse iteration above it.
double mode1_bordered_sigma(const EvolutionProblem& P, bool metric_weights) {
  const int d = P.dim();
  const int N = 2 + 2 * d;
  const SpaceTimeField u_star = P.u_star(1);
  SpaceTimeField col_l = -1.0 * apply_matrix_field(P.f_lambda_u_matrix(), u_star);
  SpaceTimeField col_s = -1.0 * apply_A_field(P, u_star);
  VecXd la = P.A_matrix().transpose() *
             (P.metric_diag().asDiagonal() * (P.A_matrix() * P.bordering()));

  const double wf = metric_weights ? M_PI : 1.0;  // Y-side field weight per cos/sin part
  VecXd w_out(N);
  w_out[0] = w_out[1] = 1.0;
  for (int i = 0; i < d; ++i) {
    const double wi = metric_weights ? P.metric_diag()[i] : 1.0;
    w_out[2 + i] = wf * wi;
    w_out[2 + d + i] = wf * wi;
  }

  auto metric_in_block = [&](const VecXd& x) -> VecXd {
    // X-side: lambda, sigma carry weight 1; each field part carries
    // pi ((1 + n^2) W + A^T W A) with n = 1
    VecXd y(N);
    y[0] = x[0];
    y[1] = x[1];
    for (int part = 0; part < 2; ++part) {
      VecXd xa = x.segment(2 + part * d, d);
      VecXd ya;
      if (metric_weights) {
        ya = M_PI * (2.0 * P.metric_diag().cwiseProduct(xa) +
                     P.A_matrix().transpose() *
                         (P.metric_diag().asDiagonal() * (P.A_matrix() * xa)));
      } else {
        ya = xa;
      }
      y.segment(2 + part * d, d) = ya;
    }
    return y;
  };

  if (N <= 2000) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd Ad = Eigen::MatrixXd(P.A_matrix());
    B.block(0, 2, 1, d) = la.transpose();
    B.block(1, 2 + d, 1, d) = la.transpose();
    B.block(2, 0, d, 1) = col_l.cos_coeff(1);
    B.block(2 + d, 0, d, 1) = col_l.sin_coeff(1);
    B.block(2, 1, d, 1) = col_s.cos_coeff(1);
    B.block(2 + d, 1, d, 1) = col_s.sin_coeff(1);
    B.block(2, 2, d, d) = -Ad;
    B.block(2 + d, 2 + d, d, d) = -Ad;
    B.block(2, 2 + d, d, d) = Eigen::MatrixXd::Identity(d, d);
    B.block(2 + d, 2, d, d) = -Eigen::MatrixXd::Identity(d, d);

    Eigen::MatrixXd Min = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      VecXd e = VecXd::Zero(N);
      e[i] = 1.0;
      Min.col(i) = metric_in_block(e);
    }
    return smallest_generalized_singular_dense(B, w_out, Min);
  }

  // sparse route: bordered solves through the (i - A_c) factorization
  auto op = P.shifted(Complex(0.0, 1.0));
  auto pack = [&](const VecXd& a, const VecXd& b) {
    SpatialVectorC p(d);
    p.real() = a;
    p.imag() = -b;
    return p;
  };
  auto core_solve = [&](const VecXd& rc, const VecXd& rs, bool transpose) {
    SpatialVectorC x = transpose ? op->solve_adjoint(pack(rc, rs)) : op->solve(pack(rc, rs));
    return std::make_pair(VecXd(x.real()), VecXd(-x.imag()));
  };
  const VecXd clc = col_l.cos_coeff(1), cls = col_l.sin_coeff(1);
  const VecXd csc = col_s.cos_coeff(1), css = col_s.sin_coeff(1);

  auto solve_fn = [&](const VecXd& r, bool transpose) -> VecXd {
    VecXd out(N);
    if (!transpose) {
      auto [u0a, u0b] = core_solve(r.segment(2, d), r.segment(2 + d, d), false);
      auto [wla, wlb] = core_solve(clc, cls, false);
      auto [wsa, wsb] = core_solve(csc, css, false);
      const double m11 = la.dot(wla), m12 = la.dot(wsa);
      const double m21 = la.dot(wlb), m22 = la.dot(wsb);
      const double det = m11 * m22 - m12 * m21;
      const double b1 = la.dot(u0a) - r[0], b2 = la.dot(u0b) - r[1];
      const double dl = (b1 * m22 - b2 * m12) / det;
      const double ds = (m11 * b2 - m21 * b1) / det;
      out[0] = dl;
      out[1] = ds;
      out.segment(2, d) = u0a - dl * wla - ds * wsa;
      out.segment(2 + d, d) = u0b - dl * wlb - ds * wsb;
    } else {
      // B^T x = r with unknowns (x1, x2, xf)
      auto [y0a, y0b] = core_solve(r.segment(2, d), r.segment(2 + d, d), true);
      auto [y1a, y1b] = core_solve(la, VecXd::Zero(d), true);
      auto [y2a, y2b] = core_solve(VecXd::Zero(d), la, true);
      auto dotcol = [&](const VecXd& ca, const VecXd& cb, const VecXd& xa, const VecXd& xb) {
        return ca.dot(xa) + cb.dot(xb);
      };
      const double m11 = dotcol(clc, cls, y1a, y1b), m12 = dotcol(clc, cls, y2a, y2b);
      const double m21 = dotcol(csc, css, y1a, y1b), m22 = dotcol(csc, css, y2a, y2b);
      const double det = m11 * m22 - m12 * m21;
      const double b1 = dotcol(clc, cls, y0a, y0b) - r[0];
      const double b2 = dotcol(csc, css, y0a, y0b) - r[1];
      const double x1 = (b1 * m22 - b2 * m12) / det;
      const double x2 = (m11 * b2 - m21 * b1) / det;
      out[0] = x1;
      out[1] = x2;
      out.segment(2, d) = y0a - x1 * y1a - x2 * y2a;
      out.segment(2 + d, d) = y0b - x1 * y1b - x2 * y2b;
    }
    return out;
  };

  RealPencilOps ops;
  ops.dim = N;
  ops.apply = [&](const VecXd& x) -> VecXd {
    VecXd y(N);
    VecXd a = x.segment(2, d), b = x.segment(2 + d, d);
    y[0] = la.dot(a);
    y[1] = la.dot(b);
    y.segment(2, d) = b - P.A_matrix() * a + x[0] * clc + x[1] * csc;
    y.segment(2 + d, d) = -a - P.A_matrix() * b + x[0] * cls + x[1] * css;
    return y;
  };
  ops.solve = [&](const VecXd& r) { return solve_fn(r, false); };
  ops.solve_transpose = [&](const VecXd& r) { return solve_fn(r, true); };
  ops.metric_in = metric_in_block;
  return smallest_generalized_singular(ops, w_out);
}

}  // namespace

IsolatednessMargin isolatedness_margin(const EvolutionProblem& P, int nt) {
  IsolatednessMargin result;
  const int d = P.dim();
  const VecXd wv = P.metric_diag();
  const VecXd ones = VecXd::Ones(d);

  Eigen::SparseLU<SparseMat> luA, luAt;
  SparseMat Ac = P.A_matrix();
  Ac.makeCompressed();
  luA.compute(Ac);
  SparseMat At = SparseMat(Ac.transpose());
  luAt.compute(At);
  if (luA.info() != Eigen::Success || luAt.info() != Eigen::Success)
    throw SpectrumProximityError("isolatedness_margin: A factorization failed", 0.0);

  auto mode0_sigma = [&](bool metric) {
    RealPencilOps ops;
    ops.dim = d;
    ops.apply = [&](const VecXd& x) -> VecXd { return -(P.A_matrix() * x); };
    ops.solve = [&](const VecXd& r) -> VecXd { return -luA.solve(r); };
    ops.solve_transpose = [&](const VecXd& r) -> VecXd { return -luAt.solve(r); };
    ops.metric_in = [&, metric](const VecXd& x) -> VecXd {
      if (!metric) return x;
      return wv.cwiseProduct(x) +
             P.A_matrix().transpose() * (wv.asDiagonal() * (P.A_matrix() * x));
    };
    return smallest_generalized_singular(ops, metric ? wv : ones);
  };

  auto moden_sigma = [&](int n, bool metric) {
    auto op = P.shifted(Complex(0.0, n));
    ComplexPencilOps ops;
    ops.dim = d;
    ops.apply = [&, n](const VecXc& x) -> VecXc {
      return Complex(0.0, n) * x - P.apply_A_c(x);
    };
    ops.solve = [&](const VecXc& r) { return op->solve(r); };
    ops.solve_adjoint = [&](const VecXc& r) { return op->solve_adjoint(r); };
    ops.metric_in = [&, n, metric](const VecXc& x) -> VecXc {
      if (!metric) return x;
      VecXc ax = P.apply_A_c(x);
      VecXc out(d);
      out.real() = (1.0 + double(n) * n) * wv.cwiseProduct(x.real()) +
                   P.A_matrix().transpose() * (wv.asDiagonal() * ax.real());
      out.imag() = (1.0 + double(n) * n) * wv.cwiseProduct(x.imag()) +
                   P.A_matrix().transpose() * (wv.asDiagonal() * ax.imag());
      return out;
    };
    return smallest_generalized_singular(ops, metric ? wv : ones);
  };

  double min_metric = mode1_bordered_sigma(P, true);
  result.per_mode_metric.emplace_back(1, min_metric);
  double min_euclid = mode1_bordered_sigma(P, false);

  double s0 = mode0_sigma(true);
  result.per_mode_metric.emplace_back(0, s0);
  min_metric = std::min(min_metric, s0);
  min_euclid = std::min(min_euclid, mode0_sigma(false));
  for (int n = 2; n <= nt; ++n) {
    double sn = moden_sigma(n, true);
    result.per_mode_metric.emplace_back(n, sn);
    min_metric = std::min(min_metric, sn);
    min_euclid = std::min(min_euclid, moden_sigma(n, false));
  }
  result.metric = min_metric;
  result.euclidean = min_euclid;
  return result;
}

SpaceTimeField solve_high_frequency(const EvolutionProblem& P, const SpaceTimeField& z,
                                    double tol_mode) {
  const double total = z.sobolev_seminorm();
  const double low = std::sqrt(z.mode_energy(0) + 2.0 * z.mode_energy(1));
  if (low > tol_mode * std::max(total, 1e-300))
    throw std::domain_error("solve_high_frequency: modes {-1,0,1} present above tolerance");

  SpaceTimeField u(z.nt(), z.nx());
  std::vector<int> modes;
  for (int n = 2; n <= z.nt(); ++n) modes.push_back(n);
  std::vector<std::string> deferred(modes.size());
  parallel_for(static_cast<int>(modes.size()), [&](int i) {
    const int n = modes[i];
    auto op = P.shifted(Complex(0.0, n));
    if (op->sigma_min_estimate() < 1e-13 * op->scale()) {
      deferred[i] = "in on the discrete spectrum at n = " + std::to_string(n);
      return;
    }
    SpatialVectorC p = fourier_coefficient(z, n);
    SpatialVectorC q = op->solve(p);
    u.cos_coeff(n) = 2.0 * q.real();
    u.sin_coeff(n) = -2.0 * q.imag();
  });
  for (size_t i = 0; i < deferred.size(); ++i)
    if (!deferred[i].empty())
      throw SpectrumProximityError("solve_high_frequency: " + deferred[i],
                                   Complex(0.0, modes[i]));

  SpaceTimeField r = time_derivative(u) - apply_A_field(P, u) - z;
  const double zn = norm_Y(P, z);
  if (norm_Y(P, r) > 1e-9 * std::max(zn, 1e-300))
    throw ConvergenceError("solve_high_frequency: residual above 1e-9 relative");
  return u;
}

ExtendedState newton_refine_Hstar(const EvolutionProblem& P, const ExtendedState& guess,
                                  const NewtonOptions& opts, std::vector<double>* trace_out) {
  ExtendedState s = guess;
  const int nt = s.u.nt();
  std::vector<double> trace;
  HValue H = assemble_H(P, s);
  double R = H.norm(P);
  trace.push_back(R);
  const double scale = std::max(1.0, norm_X(P, s.u));

  for (int it = 0; it < opts.max_iters; ++it) {
    if (R <= opts.tol * scale) {
      if (trace_out) *trace_out = trace;
      return s;
    }
    ModewiseCoreSolver core(P, nt, s.lambda, s.sigma + 1.0);
    SpaceTimeField col_l =
        -(s.sigma + 1.0) * apply_matrix_field(P.f_lambda_u_matrix(), s.u);
    SpaceTimeField col_s = -1.0 * apply_A_field(P, s.u) -
                           s.lambda * apply_matrix_field(P.f_lambda_u_matrix(), s.u);
    BorderedSolution step =
        solve_bordered(P, core, col_l, col_s, -H.h1, -H.h2, -1.0 * H.gu);

    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half <= opts.max_halvings; ++half) {
      ExtendedState trial{s.lambda + t * step.dlambda, s.sigma + t * step.dsigma,
                          s.u + t * step.du};
      HValue Ht = assemble_H(P, trial);
      const double Rt = Ht.norm(P);
      if (Rt < (1.0 - 1e-4 * t) * R) {
        s = std::move(trial);
        H = std::move(Ht);
        R = Rt;
        trace.push_back(R);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
      throw ConvergenceError("newton_refine_Hstar: line search stalled (divergence)", trace);
  }
  if (R > opts.tol * scale)
    throw ConvergenceError("newton_refine_Hstar: residual above tolerance after max iterations",
                           trace);
  if (trace_out) *trace_out = trace;
  return s;
}

}  // namespace hopfkit

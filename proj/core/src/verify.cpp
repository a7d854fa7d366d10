#include "hopfkit/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "hopfkit/conditions.hpp"
#include "hopfkit/continuation.hpp"

namespace hopfkit {

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
  const RunConfig& cfg;
  Suite suite;
  std::unique_ptr<EvolutionProblem> ex1, ex2;

  EvolutionProblem& example1() {
    if (!ex1) {
      ex1 = ex1_build(cfg.ex1);
      prepare_bordering(*ex1);
    }
    return *ex1;
  }
  EvolutionProblem& example2() {
    if (!ex2) {
      ex2 = ex2_build(cfg.ex2);
      prepare_bordering(*ex2);
    }
    return *ex2;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// branch over {0, 0.05, ..., 0.5}; returns max |lambda - a^2|, |sigma|, ||eta||
struct BranchErrors {
  double lambda_err = 0.0, sigma_err = 0.0, eta = 0.0;
};
BranchErrors branch_errors(const EvolutionProblem& P, int nt) {
  CorrectorOptions copts;
  copts.nt = nt;
  Branch br = trace_branch(P, 0.5, 11, copts);
  BranchErrors e;
  for (const auto& p : br.points) {
    e.lambda_err = std::max(e.lambda_err, std::abs(p.lambda - p.alpha * p.alpha));
    e.sigma_err = std::max(e.sigma_err, std::abs(p.sigma));
    e.eta = std::max(e.eta, p.eta_norm);
  }
  return e;
}

CriterionResult c1_example2_branch(Ctx& ctx) {
  CriterionResult r{"A1", "example2 branch matches (a^2, 0) with eta = 0", false, "", 0};
  auto t0 = Clock::now();
  BranchErrors e = branch_errors(ctx.example2(), ctx.cfg.nt);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool within = e.lambda_err <= 1e-8 && e.sigma_err <= 1e-8 && e.eta <= 1e-8;
  const bool budget = r.seconds <= 10.0;
  r.pass = within && budget;
  r.detail = "max|lambda-a^2|=" + fmt(e.lambda_err) + " max|sigma|=" + fmt(e.sigma_err) +
             " max||eta||=" + fmt(e.eta) + " (tol 1e-8, budget 10s)";
  return r;
}

CriterionResult c2_example1_branch(Ctx& ctx) {
  CriterionResult r{"A2", "example1 branch within 5e-3 with second-order convergence", false,
                    "", 0};
  auto t0 = Clock::now();
  BranchErrors coarse = branch_errors(ctx.example1(), ctx.cfg.nt);
  bool ok = coarse.lambda_err <= 5e-3 && coarse.sigma_err <= 5e-3 && coarse.eta <= 5e-3;
  std::string detail = "coarse max|lambda-a^2|=" + fmt(coarse.lambda_err);
  if (ctx.suite == Suite::full) {
    Example1Config fine_cfg = ctx.cfg.ex1;
    fine_cfg.nx *= 2;
    auto fine_problem = ex1_build(fine_cfg);
    prepare_bordering(*fine_problem);
    BranchErrors fine = branch_errors(*fine_problem, ctx.cfg.nt);
    const double ratio = coarse.lambda_err / std::max(fine.lambda_err, 1e-300);
    ok = ok && ratio >= 3.0 && ratio <= 5.0;
    detail += " fine=" + fmt(fine.lambda_err) + " ratio=" + fmt(ratio) + " (want [3,5])";
  } else {
    detail += " (refinement study skipped in fast suite)";
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  ok = ok && r.seconds <= 60.0;
  r.pass = ok;
  r.detail = detail + " budget 60s";
  return r;
}

CriterionResult c3_transversality(Ctx& ctx, bool run1, bool run2) {
  CriterionResult r{"A3", "transversality mu'(0) against quadrature oracles", false, "", 0};
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  if (run2) {
    // oracle: (1/pi) int_0^pi sin^4 x dx
    const double oracle2 =
        simpson([](double x) { return std::pow(std::sin(x), 4); }, 0.0, M_PI, 20000) / M_PI;
    const Complex mu2 = transversality(ctx.example2());
    const double err2 = std::abs(mu2 - Complex(oracle2, 0.0));
    ok = ok && err2 <= 1e-10;
    detail += "ex2: mu'=" + fmt(mu2.real()) + " err=" + fmt(err2) + " (tol 1e-10)";
  }
  if (run1) {
    const double L = ctx.cfg.ex1.L;
    const double num =
        2.0 * simpson([](double x) { return std::pow(1.0 / std::cosh(0.5 * x), 4); }, -L, L,
                      200000);
    const double den =
        2.0 * simpson([](double x) { return std::pow(1.0 / std::cosh(0.5 * x), 2); }, -L, L,
                      200000);
    const double oracle1 = num / den;  // = (2*8/3)/8 = 2/3
    const Complex mu1 = transversality(ctx.example1());
    const double err1 = std::abs(mu1 - Complex(oracle1, 0.0));
    ok = ok && err1 <= 1e-2;
    if (!detail.empty()) detail += "; ";
    detail += "ex1: mu'=" + fmt(mu1.real()) + " err=" + fmt(err1) + " (tol 1e-2)";
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult c4_lemma51(Ctx&) {
  CriterionResult r{"A4", "symbol bound J(k,xi) <= 1 and <= 2/k^2 on the grid", false, "", 0};
  auto t0 = Clock::now();
  long violations1 = 0, violations2 = 0;
  for (int k = 0; k <= 12; k == 0 ? k = 2 : ++k) {
    for (long i = -5000; i <= 5000; ++i) {
      const double xi = i * 0.01;
      const double J = lemma51_J(k, xi);
      if (!(J <= 1.0)) ++violations1;
      if (k >= 4 && !(J <= 2.0 / (double(k) * k))) ++violations2;
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = violations1 == 0 && violations2 == 0 && r.seconds <= 5.0;
  r.detail = "violations(J<=1)=" + std::to_string(violations1) +
             " violations(J<=2/k^2)=" + std::to_string(violations2) + " budget 5s";
  return r;
}

CriterionResult c5_k1(Ctx& ctx, bool run1, bool run2) {
  CriterionResult r{"A5", "resolvent decay: example1 cap and example2 modewise bounds", false,
                    "", 0};
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  if (run1) {
    auto est = estimate_K1(ctx.example1(), 4, 64);
    const double cap = 8.0 * std::sqrt(2.0) / 7.0 + 0.05;
    ok = ok && est.M <= cap;
    detail += "ex1: M=" + fmt(est.M) + " at n=" + std::to_string(est.n_at_max) +
              " cap=" + fmt(cap);
  }
  if (run2) {
    EvolutionProblem& P2 = ctx.example2();
    const int nx = P2.nx();
    bool modewise = true;
    for (int k = 2; k <= ctx.cfg.k_max && modewise; ++k) {
      const double re_shift = 2.0 / (1.0 + double(k) * k);
      for (int n = 1; n <= nx; ++n) {
        const Complex denom(double(n) * n - 2.0 + re_shift, double(k) * (1.0 - re_shift));
        const double vmag = 1.0 / std::abs(denom);  // |v_n| for d_n = 1
        if (double(n) * vmag > 1.0 + 1e-12) modewise = false;             // n |v_n| <= |d_n|
        if (vmag > 5.0 / (3.0 * k) + 1e-12) modewise = false;             // (5.20) per mode
      }
    }
    // componentwise norm bounds on random right-hand sides
    std::mt19937 rng(2024u);
    std::normal_distribution<double> dist;
    bool comps = true;
    auto l2n = [&](const VecXd& c) { return std::sqrt(0.5 * M_PI * c.squaredNorm()); };
    auto h1n = [&](const VecXd& c) {
      double s = 0;
      for (int i = 0; i < c.size(); ++i) s += (i + 1.0) * (i + 1.0) * c[i] * c[i];
      return std::sqrt(0.5 * M_PI * s);
    };
    for (int k = 2; k <= 8; ++k) {
      for (int trial = 0; trial < 5; ++trial) {
        VecXd ac(nx), bc(nx);
        for (int i = 0; i < nx; ++i) {
          ac[i] = dist(rng) / ((i + 1.0) * (i + 1.0));
          bc[i] = dist(rng) / (i + 1.0);
        }
        SpatialVectorC rhs(2 * nx);
        rhs.real().head(nx) = ac;
        rhs.real().tail(nx) = bc;
        rhs.imag().setZero();
        // (A - ik) u = rhs  <=>  u = -(ik - A)^{-1} rhs
        SpatialVectorC w = -resolvent_solve(P2, Complex(0.0, k), rhs);
        VecXd ux_re(nx), ux_im(nx), v_re(nx), v_im(nx);
        ux_re = w.real().head(nx);
        ux_im = w.imag().head(nx);
        v_re = w.real().tail(nx);
        v_im = w.imag().tail(nx);
        const double na = l2n(ac), nb = l2n(bc), nax = h1n(ac);
        const double sq = std::sqrt(1.0 + double(k) * k);
        const double bound_ux = (2.0 * na / std::sqrt(5.0) + nb + nax) / sq;
        const double bound_v = (5.0 / (3.0 * k)) * (2.0 * na / sq + nb);
        const double got_ux = std::sqrt(std::pow(h1n(ux_re), 2) + std::pow(h1n(ux_im), 2));
        const double got_v = std::sqrt(std::pow(l2n(v_re), 2) + std::pow(l2n(v_im), 2));
        if (got_ux > bound_ux * (1.0 + 1e-10)) comps = false;
        if (got_v > bound_v * (1.0 + 1e-10)) comps = false;
      }
    }
    ok = ok && modewise && comps;
    if (!detail.empty()) detail += "; ";
    detail += std::string("ex2 modewise=") + (modewise ? "ok" : "VIOLATED") +
              " component-bounds=" + (comps ? "ok" : "VIOLATED");
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult c6_noncompact_identity(Ctx& ctx) {
  CriterionResult r{"A6", "example2 resolvent identity on the bounded sine family", false, "",
                    0};
  auto t0 = Clock::now();
  EvolutionProblem& P = ctx.example2();
  const int nx = P.nx();
  double worst = 0.0;
  // (0 - A)(sin nx / n, 0) = ((z+1)/n sin nx, 2/n sin nx) at z = 0; the
  // second component's sign follows from the operator definition.
  for (int n = 1; n <= nx; ++n) {
    SpatialVectorC rhs = SpatialVectorC::Zero(2 * nx);
    rhs[n - 1] = 1.0 / n;
    rhs[nx + n - 1] = 2.0 / n;
    SpatialVectorC w = resolvent_solve(P, Complex(0.0, 0.0), rhs);
    SpatialVectorC expect = SpatialVectorC::Zero(2 * nx);
    expect[n - 1] = 1.0 / n;
    worst = std::max(worst, P.norm_V((w - expect).eval()));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = worst <= 1e-10;
  r.detail = "max V-error=" + fmt(worst) + " over n=1.." + std::to_string(nx) + " (tol 1e-10)";
  return r;
}

CriterionResult c7_high_frequency(Ctx& ctx, bool run1, bool run2) {
  CriterionResult r{"A7", "high-frequency solver bounds with the certified constant", false,
                    "", 0};
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  auto check_problem = [&](EvolutionProblem& P, const std::string& tag) {
    const int nt = ctx.cfg.nt;
    auto est = estimate_K1(P, 2, std::max(ctx.cfg.n_max, nt));
    std::mt19937 rng(77u);
    std::normal_distribution<double> dist;
    double worst_415 = 0.0, worst_416 = 0.0, worst_res = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      SpaceTimeField z(nt, P.nx());
      for (int n = 2; n <= nt; ++n) {
        for (int i = 0; i < P.dim(); ++i) {
          z.cos_coeff(n)[i] = dist(rng);
          z.sin_coeff(n)[i] = dist(rng);
        }
      }
      SpaceTimeField u = solve_high_frequency(P, z);
      SpaceTimeField res = time_derivative(u) - apply_A_field(P, u) - z;
      worst_res = std::max(worst_res, norm_Y(P, res) / norm_Y(P, z));
      for (int n = 2; n <= nt; ++n) {
        SpatialVectorC pn = fourier_coefficient(z, n);
        SpatialVectorC qn = fourier_coefficient(u, n);
        const double pnv = P.norm_V(pn);
        worst_415 = std::max(worst_415, double(n) * P.norm_V(qn) / (est.M * pnv));
        worst_416 =
            std::max(worst_416, P.norm_V(P.apply_A_c(qn)) / ((est.M + 1.0) * pnv));
      }
    }
    const bool pass = worst_415 <= 1.0 + 1e-9 && worst_416 <= 1.0 + 1e-9 &&
                      worst_res <= 1e-9;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += tag + ": n||q||/(M||p||)<=" + fmt(worst_415) + " ||Aq||/((M+1)||p||)<=" +
              fmt(worst_416) + " res=" + fmt(worst_res);
  };
  if (run2) check_problem(ctx.example2(), "ex2");
  if (run1) check_problem(ctx.example1(), "ex1");
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult c8_isolatedness(Ctx& ctx, bool run1, bool run2) {
  CriterionResult r{"A8", "isolatedness margin positive and refinement-stable", false, "", 0};
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  auto study = [&](const std::string& tag, std::function<double(int, int)> margin_at,
                   int nx0) {
    const int nt0 = ctx.cfg.nt;
    const double base = margin_at(nt0, nx0);
    bool pass = base > 0.0;
    std::string d = tag + ": margin=" + fmt(base);
    if (!pass) d += " (not positive: the extended-system block is singular; see README)";
    if (ctx.suite == Suite::full && pass) {
      const double m_nt = margin_at(2 * nt0, nx0);
      const double m_nx = margin_at(nt0, 2 * nx0);
      const double dev =
          std::max(std::abs(m_nt - base), std::abs(m_nx - base)) / std::max(base, 1e-300);
      pass = dev <= 0.15;
      d += " nt2x=" + fmt(m_nt) + " nx2x=" + fmt(m_nx) + " dev=" + fmt(dev) + " (cap 15%)";
    } else if (ctx.suite != Suite::full) {
      d += " (stability study skipped in fast suite)";
    }
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += d;
  };
  if (run2) {
    study("ex2",
          [&](int nt, int nx) {
            Example2Config c{nx};
            auto P = ex2_build(c);
            prepare_bordering(*P);
            return isolatedness_margin(*P, nt).metric;
          },
          ctx.cfg.ex2.nx);
  }
  if (run1) {
    study("ex1",
          [&](int nt, int nx) {
            Example1Config c{ctx.cfg.ex1.L, nx};
            auto P = ex1_build(c);
            prepare_bordering(*P);
            return isolatedness_margin(*P, nt).metric;
          },
          ctx.cfg.ex1.nx);
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult c9_symmetry(Ctx& ctx, bool run1, bool run2) {
  CriterionResult r{"A9", "branch symmetry under alpha -> -alpha with tau_pi", false, "", 0};
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  CorrectorOptions copts;
  copts.nt = ctx.cfg.nt;
  if (run2) {
    Branch br = trace_branch(ctx.example2(), 0.3, 7, copts);
    const double disc = check_symmetry(ctx.example2(), br, copts);
    ok = ok && disc <= 1e-8;
    detail += "ex2 discrepancy=" + fmt(disc) + " (tol 1e-8)";
  }
  if (run1) {
    Branch br = trace_branch(ctx.example1(), 0.3, 7, copts);
    const double disc = check_symmetry(ctx.example1(), br, copts);
    ok = ok && disc <= 5e-3;
    if (!detail.empty()) detail += "; ";
    detail += "ex1 discrepancy=" + fmt(disc) + " (tol 5e-3)";
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult c10_matching(Ctx& ctx) {
  CriterionResult r{"A10", "uniqueness matching recovers (alpha, theta) on the grid", false,
                    "", 0};
  auto t0 = Clock::now();
  EvolutionProblem& P = ctx.example2();
  CorrectorOptions copts;
  copts.nt = ctx.cfg.nt;
  Branch br = trace_branch(P, 0.3, 7, copts);
  MatchOptions mopts;
  mopts.corrector = copts;
  mopts.norm_window = 4.0;  // the alpha-grid tops out at ||v||_X ~ 2
  mopts.tol = 1e-6;
  double worst = 0.0;
  for (const auto& p : br.points) {
    if (p.alpha < 0.049) continue;
    for (int it = 0; it < 8; ++it) {
      const double theta = it * M_PI / 4.0;
      SpaceTimeField v = translate(p.u, -theta);  // v(t) = u(t + theta)
      MatchResult m = match_solution(P, br, p.lambda, p.sigma, v, mopts);
      double dth = std::abs(m.theta - theta);
      dth = std::min(dth, 2.0 * M_PI - dth);
      worst = std::max(worst, std::max(std::abs(m.alpha - p.alpha), dth));
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = worst <= 1e-6;
  r.detail = "max recovery error=" + fmt(worst) + " on 48 (alpha,theta) pairs (tol 1e-6)";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const RunConfig& cfg, Suite suite,
    const std::function<void(const CriterionResult&)>& on_result) {
  Ctx ctx{cfg, suite, nullptr, nullptr};
  const bool run1 = suite == Suite::full || cfg.problem == "example1";
  const bool run2 = suite == Suite::full || cfg.problem == "example2";

  std::vector<CriterionResult> results;
  auto push = [&](CriterionResult res) {
    if (on_result) on_result(res);
    results.push_back(std::move(res));
  };

  if (run2) push(c1_example2_branch(ctx));
  if (run1) push(c2_example1_branch(ctx));
  push(c3_transversality(ctx, run1, run2));
  push(c4_lemma51(ctx));
  push(c5_k1(ctx, run1, run2));
  if (run2) push(c6_noncompact_identity(ctx));
  push(c7_high_frequency(ctx, run1, run2));
  push(c8_isolatedness(ctx, run1, run2));
  push(c9_symmetry(ctx, run1, run2));
  if (run2) push(c10_matching(ctx));
  return results;
}

}  // namespace hopfkit

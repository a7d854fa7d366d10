#include "hopfkit/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hopfkit {

BranchPoint exact_branch(const EvolutionProblem& P, double alpha, int nt) {
  if (alpha < 0.0) throw ConfigError("exact_branch: alpha must be >= 0");
  BranchPoint p;
  p.alpha = alpha;
  p.lambda = alpha * alpha;
  p.sigma = 0.0;
  p.u = alpha * l1_embed(P.psi_star_initial(), nt);
  p.eta_norm = 0.0;
  p.g_residual = norm_Y(P, residual_g(P, ExtendedState{p.lambda, p.sigma, p.u}));
  p.newton_iters = 0;
  return p;
}

namespace {

struct CorrectorState {
  double lambda, sigma;
  SpaceTimeField eta;
};

double corrector_residual(const EvolutionProblem& P, double s, const CorrectorState& c,
                          const SpaceTimeField& u_star, SpaceTimeField* g_out,
                          double* l1_out, double* l2_out) {
  SpaceTimeField u = s * u_star + s * c.eta;
  SpaceTimeField g = residual_g(P, ExtendedState{c.lambda, c.sigma, u});
  auto [l1e, l2e] = functional_l(P, c.eta);
  const double gy = norm_Y(P, g);
  if (g_out) *g_out = std::move(g);
  if (l1_out) *l1_out = l1e;
  if (l2_out) *l2_out = l2e;
  return std::sqrt(l1e * l1e + l2e * l2e + gy * gy);
}

}  // namespace

BranchPoint corrector(const EvolutionProblem& P, double alpha, const BranchPoint& guess,
                      const CorrectorOptions& opts) {
  const int nt = opts.nt;
  if (alpha == 0.0) {
    BranchPoint trivial;
    trivial.u = SpaceTimeField(nt, P.nx());
    return trivial;
  }
  const double s = alpha;
  const SpaceTimeField u_star = P.u_star(nt);

  CorrectorState c{guess.lambda, guess.sigma, SpaceTimeField(nt, P.nx())};
  if (guess.alpha != 0.0 && guess.u.same_shape(c.eta)) {
    // eta from the guess point: u_guess = a (u_star + eta)
    c.eta = (1.0 / guess.alpha) * guess.u - u_star;
  }

  SpaceTimeField g(nt, P.nx());
  double l1e = 0.0, l2e = 0.0;
  double R = corrector_residual(P, s, c, u_star, &g, &l1e, &l2e);
  const double amp = std::max(std::abs(s), s * s);

  int iters = 0;
  std::vector<double> trace{R};
  for (; iters < opts.max_iters; ++iters) {
    SpaceTimeField u = s * u_star + s * c.eta;
    const double scale = std::max(1.0, norm_X(P, u));
    const double target = std::max(1e-13, 1e-3 * opts.tol * amp * scale);
    if (R <= target) break;

    // quasi-Newton core: d/dt - (sigma+1)(A + h_u(lambda, 0)), frozen at eta;
    // the lambda and sigma columns are exact. If the core is resonant at the
    // current lambda (degenerate problems at lambda = 0), evaluate it at the
    // leading-order branch parameter instead; the residual still decides.
    auto make_core = [&]() {
      try {
        return ModewiseCoreSolver(P, nt, c.lambda, c.sigma + 1.0);
      } catch (const SpectrumProximityError&) {
        return ModewiseCoreSolver(P, nt, c.lambda + s * s, c.sigma + 1.0);
      }
    };
    ModewiseCoreSolver core = make_core();
    SpaceTimeField col_l = -(c.sigma + 1.0) * h_lambda_field(P, c.lambda, u);
    SpaceTimeField col_s = -1.0 * apply_A_field(P, u) - h_field(P, c.lambda, u);
    // unknown is eta with u = s(u_star + eta): fold the amplitude into the rhs
    BorderedSolution step = solve_bordered(P, core, (1.0 / s) * col_l, (1.0 / s) * col_s,
                                           -l1e, -l2e, (-1.0 / s) * g);

    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half <= opts.max_halvings; ++half) {
      CorrectorState trial{c.lambda + t * step.dlambda, c.sigma + t * step.dsigma,
                           c.eta + t * step.du};
      SpaceTimeField gt(nt, P.nx());
      double l1t, l2t;
      const double Rt = corrector_residual(P, s, trial, u_star, &gt, &l1t, &l2t);
      if (Rt < (1.0 - 1e-4 * t) * R || Rt <= target) {
        c = std::move(trial);
        g = std::move(gt);
        l1e = l1t;
        l2e = l2t;
        R = Rt;
        trace.push_back(R);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // stagnation at the floating-point floor still counts if the
      // contract tolerance is met
      break;
    }
  }

  SpaceTimeField u = s * u_star + s * c.eta;
  const double scale = std::max(1.0, norm_X(P, u));
  if (R > opts.tol * amp * scale) {
    std::ostringstream msg;
    msg << "corrector: residual " << R << " above tolerance " << opts.tol * amp * scale
        << " at alpha = " << alpha;
    throw ConvergenceError(msg.str(), trace);
  }

  BranchPoint out;
  out.alpha = alpha;
  out.lambda = c.lambda;
  out.sigma = c.sigma;
  out.u = std::move(u);
  out.eta_norm = norm_X(P, c.eta);
  out.g_residual = norm_Y(P, g);
  out.newton_iters = iters;
  return out;
}

Branch trace_branch(const EvolutionProblem& P, double alpha_max, int steps,
                    const CorrectorOptions& opts) {
  if (!(alpha_max > 0.0)) throw ConfigError("trace_branch: alpha_max must be positive");
  if (steps < 2) throw ConfigError("trace_branch: steps must be >= 2");

  Branch branch;
  branch.problem = P.name();
  BranchPoint prev = corrector(P, 0.0, BranchPoint{}, opts);
  branch.points.push_back(prev);

  for (int i = 1; i < steps; ++i) {
    const double a = alpha_max * i / (steps - 1);
    BranchPoint guess;
    if (prev.alpha == 0.0) {
      // first positive step: trivial solution plus a * u_star; zeta predicted
      // at its leading-order form (zeta'(0) = 0, so lambda ~ a^2)
      guess.alpha = a;
      guess.lambda = a * a;
      guess.sigma = 0.0;
      guess.u = a * P.u_star(opts.nt);
    } else {
      const double r = a / prev.alpha;
      guess.alpha = a;
      guess.lambda = prev.lambda * r * r;
      guess.sigma = prev.sigma * r * r;
      guess.u = r * prev.u;  // rescales eta by r as well
    }
    try {
      prev = corrector(P, a, guess, opts);
    } catch (const BranchTraceError&) {
      throw;
    } catch (const Error& e) {
      throw BranchTraceError(std::string("trace_branch aborted: ") + e.what(), branch);
    }
    branch.points.push_back(prev);
  }
  return branch;
}

double check_symmetry(const EvolutionProblem& P, const Branch& branch,
                      const CorrectorOptions& opts) {
  double worst = 0.0;
  BranchPoint prev_neg;  // trivial
  prev_neg.u = SpaceTimeField(opts.nt, P.nx());
  for (const BranchPoint& p : branch.points) {
    if (p.alpha == 0.0) continue;
    // direct correction at -alpha (guess continued along the negative side,
    // not the symmetry image, so the comparison is a real cross-check)
    BranchPoint guess;
    if (prev_neg.alpha == 0.0) {
      guess.alpha = -p.alpha;
      guess.lambda = p.alpha * p.alpha;
      guess.sigma = 0.0;
      guess.u = -p.alpha * P.u_star(opts.nt);
    } else {
      const double r = (-p.alpha) / prev_neg.alpha;
      guess.alpha = -p.alpha;
      guess.lambda = prev_neg.lambda * r * r;
      guess.sigma = prev_neg.sigma * r * r;
      guess.u = r * prev_neg.u;
    }
    BranchPoint neg = corrector(P, -p.alpha, guess, opts);
    prev_neg = neg;

    const double dzeta =
        std::abs(neg.lambda - p.lambda) + std::abs(neg.sigma - p.sigma);
    // eta(-a) + tau_pi eta(a)
    SpaceTimeField eta_pos = (1.0 / p.alpha) * p.u - P.u_star(opts.nt);
    SpaceTimeField eta_neg = (1.0 / -p.alpha) * neg.u - P.u_star(opts.nt);
    const double deta = norm_X(P, eta_neg + translate(eta_pos, M_PI));
    worst = std::max(worst, dzeta + deta);
  }
  return worst;
}

std::pair<double, SpaceTimeField> phase_align(const EvolutionProblem& P,
                                              const SpaceTimeField& v) {
  auto [p, q] = functional_l(P, v);
  const double r = std::hypot(p, q);
  if (r < 1e-13 * std::max(1.0, v.max_abs()))
    throw DegeneracyError("phase_align: l(v) vanishes (degenerate phase)");
  double theta = std::atan2(-q, p);
  if (theta < 0.0) theta += 2.0 * M_PI;
  return {theta, translate(v, theta)};
}

MatchResult match_solution(const EvolutionProblem& P, const Branch& branch, double lambda,
                           double sigma, const SpaceTimeField& v, const MatchOptions& opts) {
  if (std::abs(lambda) >= opts.lambda_window || std::abs(sigma) >= opts.sigma_window ||
      norm_X(P, v) >= opts.norm_window)
    throw std::domain_error("match_solution: candidate outside the uniqueness window");

  auto [theta, aligned] = phase_align(P, v);
  auto [alpha, l2val] = functional_l(P, aligned);
  (void)l2val;

  // nearest traced point provides the corrector guess
  const BranchPoint* nearest = nullptr;
  for (const auto& p : branch.points)
    if (!nearest || std::abs(p.alpha - alpha) < std::abs(nearest->alpha - alpha)) nearest = &p;
  BranchPoint guess;
  if (nearest && nearest->alpha != 0.0) {
    const double r = alpha / nearest->alpha;
    guess.alpha = alpha;
    guess.lambda = nearest->lambda * r * r;
    guess.sigma = nearest->sigma * r * r;
    guess.u = r * nearest->u;
  } else {
    guess.alpha = alpha;
    guess.u = alpha * P.u_star(opts.corrector.nt);
  }
  BranchPoint corrected = corrector(P, alpha, guess, opts.corrector);

  const double dist = norm_X(P, aligned - corrected.u);
  if (dist > opts.tol) {
    std::ostringstream msg;
    msg << "match_solution: candidate is " << dist
        << " from the branch in X (tolerance " << opts.tol << ")";
    throw NoMatchError(msg.str(), dist);
  }
  return {alpha, theta, dist};
}

}  // namespace hopfkit

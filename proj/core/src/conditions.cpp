#include "hopfkit/conditions.hpp"

#include <cmath>
#include <sstream>

#include "hopfkit/errors.hpp"

namespace hopfkit {

std::pair<Complex, SpatialVectorC> find_critical_eigenpair(const EvolutionProblem& P,
                                                           int max_iters) {
  const SpatialVectorC guess = P.psi_star();
  if (guess.size() != P.dim() || guess.norm() == 0.0)
    throw ConfigError("find_critical_eigenpair: no initial guess available");

  const Complex shift(1e-8, 1.0);
  auto op = P.shifted(shift);

  SpatialVectorC v = guess / P.norm_V(guess);
  Complex mu{};
  bool converged = false;
  std::vector<double> trace;
  for (int it = 0; it < max_iters; ++it) {
    SpatialVectorC w = op->solve(v);
    w /= P.norm_V(w);
    SpatialVectorC Aw = P.apply_A_c(w);
    mu = P.inner_V(Aw, w) / P.inner_V(w, w);
    const double res = P.norm_V((Aw - mu * w).eval());
    trace.push_back(res);
    v = w;
    if (res <= 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("find_critical_eigenpair: no convergence within iteration budget",
                           trace);
  if (std::abs(mu - Complex(0.0, 1.0)) > 0.5) {
    std::ostringstream msg;
    msg << "find_critical_eigenpair: converged to mu = (" << mu.real() << ", " << mu.imag()
        << "), farther than 0.5 from i";
    throw WrongEigenvalueError(msg.str());
  }

  // deterministic normalization: phase-align to the guess, scale to the target
  Complex c = P.inner_V(v, guess);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
  v *= P.psi_star_norm_target() / P.norm_V(v);
  return {mu, v};
}

std::pair<double, double> check_simplicity(const EvolutionProblem& P) {
  if (P.psi_sharp().size() != P.dim())
    throw ConfigError("check_simplicity: psi_sharp not available");
  auto sv = P.shifted_singular_values(Complex(0.0, 1.0), 2);
  const double gap = sv.size() > 1 ? sv[1] : sv[0];
  const double nondeg = std::abs(P.inner_V(P.psi_sharp(), P.psi_star()));
  return {gap, nondeg};
}

Complex transversality(const EvolutionProblem& P) {
  const Complex pairing = P.inner_V(P.psi_sharp(), P.psi_star());
  if (std::abs(pairing) < 1e-10)
    throw DegeneracyError("transversality: (psi_sharp, psi_star)_V is numerically zero");
  const Complex num = P.inner_V(P.psi_sharp(), P.h_lambda_u_apply(P.psi_star()));
  return num / pairing;
}

std::vector<std::pair<int, double>> check_B3(const EvolutionProblem& P, int k_max) {
  if (k_max < 2) throw ConfigError("check_B3: k_max must be >= 2");
  std::vector<int> ks{0};
  for (int k = 2; k <= k_max; ++k) ks.push_back(k);
  std::vector<std::pair<int, double>> out(ks.size());
  parallel_for(static_cast<int>(ks.size()), [&](int i) {
    out[i] = {ks[i], P.shifted_singular_values(Complex(0.0, ks[i]), 1)[0]};
  });
  return out;
}

K1Estimate estimate_K1(const EvolutionProblem& P, int n_min, int n_max) {
  if (!(2 <= n_min && n_min < n_max)) throw ConfigError("estimate_K1: need 2 <= n_min < n_max");
  std::vector<double> norms(n_max - n_min + 1);
  parallel_for(n_max - n_min + 1, [&](int i) {
    const int n = n_min + i;
    const double smin = P.shifted_singular_values(Complex(0.0, n), 1)[0];
    if (smin < 1e-13)
      throw SpectrumProximityError("estimate_K1: ik hit the discrete spectrum",
                                   Complex(0.0, n));
    norms[i] = double(n) / smin;
  });
  K1Estimate est;
  for (int i = 0; i < static_cast<int>(norms.size()); ++i) {
    if (norms[i] > est.M) {
      est.M = norms[i];
      est.n_at_max = n_min + i;
    }
  }
  return est;
}

double lemma51_J(int k, double xi) {
  const double x4 = xi * xi * xi * xi;
  const double kk = double(k) * k;
  const double den = x4 * x4 + 2.0 * (kk + 1.0) * x4 + (1.0 - kk) * (1.0 - kk);
  if (den == 0.0) throw PoleError("lemma51_J: pole at k = +-1, xi = 0");
  const double kp = double(k) + 1.0;
  return (x4 + kp * kp) / den;
}

std::pair<Complex, Complex> ex1_resolvent_symbol(int k, double xi, Complex gamma,
                                                 Complex omega) {
  const Complex s(xi * xi, double(k));
  const Complex den = 1.0 + s * s;
  if (std::abs(den) < 1e-300) throw PoleError("ex1_resolvent_symbol: symbol pole");
  return {(-s * gamma + omega) / den, -(gamma + s * omega) / den};
}

ConditionReport run_conditions(const EvolutionProblem& P, int k_max, int n_max,
                               const ConditionTolerances& tol) {
  ConditionReport rep;
  rep.problem = P.name();
  auto [mu, psi] = find_critical_eigenpair(P);
  (void)psi;
  rep.b1_eigenvalue = mu;
  std::tie(rep.b1_simplicity_gap, rep.b1_nondegeneracy) = check_simplicity(P);
  rep.b2_mu_prime = transversality(P);
  rep.b3_margins = check_B3(P, k_max);

  auto est = estimate_K1(P, 2, n_max);
  rep.k1_constant = est.M;
  rep.k1_n_at_max = est.n_at_max;
  auto [cap, cap_n_min] = P.k1_reference_bound();
  rep.k1_cap = cap;
  rep.k1_cap_n_min = cap_n_min;
  if (cap_n_min <= 2) {
    rep.k1_certified = est.M;
  } else {
    auto cert = estimate_K1(P, cap_n_min, n_max);
    rep.k1_certified = cert.M;
  }

  rep.pass_b1 = rep.b1_simplicity_gap > tol.b1_gap && rep.b1_nondegeneracy > tol.b1_nondeg;
  rep.pass_b2 = std::abs(rep.b2_mu_prime.real()) > tol.b2;
  rep.pass_b3 = true;
  for (const auto& [k, margin] : rep.b3_margins)
    if (!(margin > tol.b3 * std::max(1.0, double(k)))) rep.pass_b3 = false;
  rep.pass_k1 = rep.k1_certified <= rep.k1_cap;
  return rep;
}

}  // namespace hopfkit

#ifndef HOPFKIT_CONDITIONS_HPP
#define HOPFKIT_CONDITIONS_HPP

#include <utility>
#include <vector>

#include "hopfkit/problem.hpp"

namespace hopfkit {

/// Per-hypothesis numerical margins. Margins are V-metric quantities of the
/// discretized operators; pass flags compare them against the tolerances the
/// report was produced with.
struct ConditionReport {
  std::string problem;
  Complex b1_eigenvalue{};        // computed mu near i
  double b1_simplicity_gap = 0;   // second-smallest singular value of (i - A_c)
  double b1_nondegeneracy = 0;    // |(psi_sharp, psi_star)_V|
  Complex b2_mu_prime{};          // mu'(0)
  std::vector<std::pair<int, double>> b3_margins;  // (k, sigma_min(ik - A_c))
  double k1_constant = 0;         // max n ||(in - A_c)^{-1}|| over the sweep
  int k1_n_at_max = 0;
  double k1_certified = 0;        // same max restricted to n >= k1_cap_n_min
  double k1_cap = 0;
  int k1_cap_n_min = 0;
  bool pass_b1 = false, pass_b2 = false, pass_b3 = false, pass_k1 = false;
  bool pass_all() const { return pass_b1 && pass_b2 && pass_b3 && pass_k1; }
};

struct ConditionTolerances {
  double b1_gap = 2e-2;
  double b1_nondeg = 1e-1;
  double b2 = 1e-3;        // pass(B2) iff |Re mu'(0)| > b2
  double b3 = 1e-6;        // margin_k must exceed b3 * max(1, k)
};

/// Shifted inverse iteration near i on the discretized A_c. The shift carries
/// a 1e-8 real offset so the factorization stays off the discrete spectrum
/// (for the sine-basis problem, i - A_c is exactly singular). Converges when
/// ||A psi - mu psi||_V <= 1e-10 ||psi||_V; the result is phase-aligned to the
/// problem's initial guess and scaled to the problem's norm target.
std::pair<Complex, SpatialVectorC> find_critical_eigenpair(const EvolutionProblem& P,
                                                           int max_iters = 200);

/// (gap, nondeg): gap certifies kernel simplicity of (i - A_c); nondeg is
/// |(psi_sharp, psi_star)_V|, positive when psi_star misses R(i - A_c).
std::pair<double, double> check_simplicity(const EvolutionProblem& P);

/// mu'(0) = (psi_sharp, f0_lambda_u psi_star)_V / (psi_sharp, psi_star)_V.
Complex transversality(const EvolutionProblem& P);

/// sigma_min(ik - A_c) for k in {0, 2, 3, ..., k_max}; A real, so negative k
/// follows by conjugation. Failures are reported via the margins, not thrown.
std::vector<std::pair<int, double>> check_B3(const EvolutionProblem& P, int k_max);

struct K1Estimate {
  double M = 0;     // max over the sweep of n ||(in - A_c)^{-1}||_V
  int n_at_max = 0;
};
K1Estimate estimate_K1(const EvolutionProblem& P, int n_min, int n_max);

/// J(k, xi) = (xi^4 + (k+1)^2) / (xi^8 + 2(k^2+1) xi^4 + (1-k^2)^2).
double lemma51_J(int k, double xi);

/// Fourier-symbol solve of (A_0c - ik)(phi, psi) = (gamma, omega) for the
/// constant-coefficient part of example1:
///   phi = (-(xi^2 + ik) gamma + omega) / (1 + (xi^2 + ik)^2),
///   psi = -(gamma + (xi^2 + ik) omega) / (1 + (xi^2 + ik)^2).
std::pair<Complex, Complex> ex1_resolvent_symbol(int k, double xi, Complex gamma,
                                                 Complex omega);

/// Runs B1/B2/B3/K1 with margins and pass flags.
ConditionReport run_conditions(const EvolutionProblem& P, int k_max, int n_max,
                               const ConditionTolerances& tol = {});

}  // namespace hopfkit

#endif

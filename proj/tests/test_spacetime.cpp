#include <doctest.h>

#include "hopfkit/example1.hpp"
#include "hopfkit/example2.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hopfkit;

namespace {
const int kNt = 8;

SpatialVector unit_vec(int dim, int i) {
  SpatialVector v = SpatialVector::Zero(dim);
  v[i] = 1.0;
  return v;
}

double field_max_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
  return (a - b).max_abs();
}
}  // namespace

TEST_CASE("fourier coefficient reads trigonometric coefficients exactly") {
  const int nx = 3, dim = 6;
  SpatialVector psi = unit_vec(dim, 1) + 2.0 * unit_vec(dim, 4);

  SUBCASE("real psi (x) c1 has u_hat(1) = psi/2") {
    SpaceTimeField u = field_from_mode(kNt, 1, psi, SpatialVector::Zero(dim));
    SpatialVectorC uh = fourier_coefficient(u, 1);
    CHECK((uh - 0.5 * psi.cast<Complex>()).norm() == doctest::Approx(0.0));
    CHECK(fourier_coefficient(u, 0).norm() == 0.0);
  }

  SUBCASE("zero field has zero coefficients") {
    SpaceTimeField z(kNt, nx);
    for (int n = -kNt; n <= kNt; ++n) CHECK(fourier_coefficient(z, n).norm() == 0.0);
  }

  SUBCASE("Re(psi (x) e1) for complex psi") {
    // expand Re((a+ib) e^{it}) = a cos t - b sin t by hand, then apply the
    // coefficient definition
    SpatialVectorC psic = oracles::random_complex_vec(dim, 11u);
    SpaceTimeField u = l1_embed(psic, kNt);
    CHECK((fourier_coefficient(u, 1) - 0.5 * psic).norm() < 1e-15 * psic.norm());
    CHECK((fourier_coefficient(u, -1) - 0.5 * psic.conjugate()).norm() <
          1e-15 * psic.norm());
    for (int n : {0, 2, 3, 5}) CHECK(fourier_coefficient(u, n).norm() == 0.0);
  }

  SUBCASE("mode out of range") {
    SpaceTimeField u(kNt, nx);
    CHECK_THROWS_AS((void)fourier_coefficient(u, kNt + 1), std::out_of_range);
  }
}

TEST_CASE("split_frequencies partitions modes and reconstructs") {
  const int nx = 4, dim = 8;

  SUBCASE("constant field is all low0") {
    SpaceTimeField u = field_from_mode(kNt, 0, unit_vec(dim, 2), SpatialVector());
    FrequencySplit s = split_frequencies(u);
    CHECK(field_max_diff(s.low0, u) == 0.0);
    CHECK(s.low1.max_abs() == 0.0);
    CHECK(s.high.max_abs() == 0.0);
  }

  SUBCASE("psi (x) c2 is all high") {
    SpaceTimeField u = field_from_mode(kNt, 2, unit_vec(dim, 0), SpatialVector::Zero(dim));
    FrequencySplit s = split_frequencies(u);
    CHECK(field_max_diff(s.high, u) == 0.0);
    CHECK(s.low0.max_abs() == 0.0);
    CHECK(s.low1.max_abs() == 0.0);
  }

  SUBCASE("superposition of modes 0, 1, 3 lands in the right parts") {
    SpaceTimeField u = oracles::random_field(kNt, nx, 5u, 0, 0) +
                       oracles::random_field(kNt, nx, 6u, 1, 1) +
                       oracles::random_field(kNt, nx, 7u, 3, 3);
    FrequencySplit s = split_frequencies(u);
    CHECK(s.low0.mode_energy(0) > 0.0);
    CHECK(s.low1.mode_energy(1) > 0.0);
    CHECK(s.high.mode_energy(3) > 0.0);
    CHECK(s.high.mode_energy(1) == 0.0);
    CHECK(field_max_diff(s.low0 + s.low1 + s.high, u) <= 1e-13);
    for (int n : {-1, 0, 1}) CHECK(fourier_coefficient(s.high, n).norm() == 0.0);
  }

  SUBCASE("parts sum to the input on random fields") {
    for (unsigned seed : {1u, 2u, 3u}) {
      SpaceTimeField u = oracles::random_field(kNt, nx, seed);
      FrequencySplit s = split_frequencies(u);
      CHECK(field_max_diff(s.low0 + s.low1 + s.high, u) <= 1e-13);
    }
  }
}

TEST_CASE("l1_embed and l1_inverse") {
  const int dim = 6;

  SUBCASE("real psi goes to the cosine slot") {
    SpatialVector a = unit_vec(dim, 3);
    SpaceTimeField u = l1_embed(a.cast<Complex>(), kNt);
    CHECK((u.cos_coeff(1) - a).norm() == 0.0);
    CHECK(u.sin_coeff(1).norm() == 0.0);
  }

  SUBCASE("imaginary psi = ib goes to minus the sine slot") {
    SpatialVector b = unit_vec(dim, 2);
    SpatialVectorC psi = Complex(0, 1) * b.cast<Complex>();
    SpaceTimeField u = l1_embed(psi, kNt);
    CHECK(u.cos_coeff(1).norm() == 0.0);
    CHECK((u.sin_coeff(1) + b).norm() == 0.0);
  }

  SUBCASE("example1: psi_star = (kappa, -i kappa) embeds to (kappa cos t, kappa sin t)") {
    auto P = ex1_build({});
    SpaceTimeField u = l1_embed(P->psi_star_initial(), kNt);
    const int nx = P->nx();
    for (int j : {0, nx / 2, nx - 1}) {
      const double k = P->kappa()[j];
      CHECK(u.cos_coeff(1)[j] == doctest::Approx(k));       // u-component, cos t
      CHECK(u.sin_coeff(1)[nx + j] == doctest::Approx(k));  // v-component, sin t
      CHECK(u.cos_coeff(1)[nx + j] == doctest::Approx(0.0));
      CHECK(u.sin_coeff(1)[j] == doctest::Approx(0.0));
    }
  }

  SUBCASE("example2: l1_inverse of u_star is (sin x, (1+i) sin x)") {
    auto P = ex2_build({});
    SpaceTimeField ustar = P->u_star(kNt);
    SpatialVectorC psi = l1_inverse(ustar);
    const int nx = P->nx();
    CHECK(std::abs(psi[0] - Complex(1, 0)) < 1e-14);
    CHECK(std::abs(psi[nx] - Complex(1, 1)) < 1e-14);
    for (int j = 1; j < nx; ++j) {
      CHECK(std::abs(psi[j]) < 1e-14);
      CHECK(std::abs(psi[nx + j]) < 1e-14);
    }
  }

  SUBCASE("round trip is the identity to 1e-14") {
    for (unsigned seed : {21u, 22u, 23u}) {
      SpatialVectorC psi = oracles::random_complex_vec(dim, seed);
      SpatialVectorC back = l1_inverse(l1_embed(psi, kNt));
      CHECK((back - psi).norm() <= 1e-14 * psi.norm());
    }
  }

  SUBCASE("mode-2 energy above tolerance is a domain error") {
    SpaceTimeField u = l1_embed(oracles::random_complex_vec(dim, 31u), kNt);
    u.cos_coeff(2)[0] = 1e-3;
    CHECK_THROWS_AS((void)l1_inverse(u), std::domain_error);
  }
}

TEST_CASE("translate is the exact mode-wise rotation group") {
  const int nx = 3;

  SUBCASE("tau_2pi and tau_0 are the identity") {
    SpaceTimeField u = oracles::random_field(kNt, nx, 41u);
    CHECK(field_max_diff(translate(u, 2.0 * M_PI), u) < 1e-14 * u.max_abs());
    CHECK(field_max_diff(translate(u, 0.0), u) == 0.0);
  }

  SUBCASE("tau_{pi/2} maps psi (x) c1 to psi (x) s1") {
    SpatialVector psi = unit_vec(2 * nx, 1);
    SpaceTimeField u = field_from_mode(kNt, 1, psi, SpatialVector::Zero(2 * nx));
    SpaceTimeField v = translate(u, M_PI / 2.0);
    CHECK((v.sin_coeff(1) - psi).norm() < 1e-15);
    CHECK(v.cos_coeff(1).norm() < 1e-15);
  }

  SUBCASE("group action tau_theta tau_phi = tau_{theta+phi} to 1e-12") {
    SpaceTimeField u = oracles::random_field(kNt, nx, 42u);
    for (double theta : {0.3, 1.7, 4.0}) {
      for (double phi : {-0.9, 2.2}) {
        SpaceTimeField lhs = translate(translate(u, theta), phi);
        SpaceTimeField rhs = translate(u, theta + phi);
        CHECK(field_max_diff(lhs, rhs) <= 1e-12 * std::max(1.0, u.max_abs()));
      }
    }
  }

  SUBCASE("tau_pi(u_star) = -u_star") {
    auto P = ex2_build({});
    SpaceTimeField ustar = P->u_star(kNt);
    CHECK(field_max_diff(translate(ustar, M_PI), -1.0 * ustar) < 1e-15);
  }
}

TEST_CASE("time_derivative rotates modes") {
  const int dim = 6;

  SUBCASE("constant field maps to zero") {
    SpaceTimeField u = field_from_mode(kNt, 0, unit_vec(dim, 0), SpatialVector());
    CHECK(time_derivative(u).max_abs() == 0.0);
  }

  SUBCASE("d/dt of psi (x) c1 is -psi (x) s1") {
    SpatialVector psi = unit_vec(dim, 4);
    SpaceTimeField u = field_from_mode(kNt, 1, psi, SpatialVector::Zero(dim));
    SpaceTimeField du = time_derivative(u);
    CHECK((du.sin_coeff(1) + psi).norm() == 0.0);
    CHECK(du.cos_coeff(1).norm() == 0.0);
  }

  SUBCASE("u_star in N(T1): du_star/dt = A u_star") {
    auto P = ex2_build({});
    SpaceTimeField ustar = P->u_star(kNt);
    CHECK(field_max_diff(time_derivative(ustar), apply_A_field(*P, ustar)) < 1e-14);
  }
}

TEST_CASE("Parseval: sampled Y norm matches the coefficient formula") {
  auto P = ex2_build(Example2Config{16});
  SpaceTimeField u = oracles::random_field(kNt, P->nx(), 55u);
  const double coeff = norm_Y(*P, u);
  const double sampled = oracles::norm_Y_sampled(*P, u);
  CHECK(std::abs(coeff - sampled) <= 1e-12 * coeff);
}

TEST_CASE("bordering functionals l = (l1, l2)") {
  auto P = ex2_build({});
  prepare_bordering(*P);
  SpaceTimeField ustar = P->u_star(kNt);

  SUBCASE("l(u_star) = (1, 0)") {
    auto [l1, l2] = functional_l(*P, ustar);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(l2) < 1e-12);
  }

  SUBCASE("l(A u_star) = (0, -1)") {
    auto [l1, l2] = functional_l(*P, apply_A_field(*P, ustar));
    CHECK(std::abs(l1) < 1e-12);
    CHECK(l2 == doctest::Approx(-1.0).epsilon(1e-12));
  }

  SUBCASE("modes 0 and >= 2 are annihilated") {
    SpaceTimeField u = oracles::random_field(kNt, P->nx(), 66u, 0, 0) +
                       oracles::random_field(kNt, P->nx(), 67u, 2, kNt);
    auto [l1, l2] = functional_l(*P, u);
    CHECK(l1 == 0.0);
    CHECK(l2 == 0.0);
  }

  SUBCASE("rotation action: l(tau_theta u_star) = (cos theta, sin theta)") {
    for (int i = 0; i < 32; ++i) {
      const double theta = 2.0 * M_PI * i / 32.0;
      auto [l1, l2] = functional_l(*P, translate(ustar, theta));
      CHECK(std::abs(l1 - std::cos(theta)) <= 1e-12);
      CHECK(std::abs(l2 - std::sin(theta)) <= 1e-12);
    }
  }
}

TEST_CASE("apply_T1") {
  SUBCASE("u_star lies in the kernel (both examples)") {
    auto P1 = ex1_build({});
    auto P2 = ex2_build({});
    CHECK(norm_Y(*P2, apply_T1(*P2, P2->u_star(kNt))) < 1e-12);
    // example1 to discretization accuracy: C h^2 with h ~ 0.1
    SpaceTimeField t1 = apply_T1(*P1, l1_embed(P1->psi_star_initial(), kNt));
    CHECK(norm_Y(*P1, t1) < 1e-3);
  }

  SUBCASE("A = 0 stub: T1 w = dw/dt") {
    auto stub = testsupport::StubProblem(
        testsupport::dense_to_sparse(Eigen::MatrixXd::Zero(2, 2)), VecXd::Ones(2),
        testsupport::dense_to_sparse(Eigen::MatrixXd::Zero(2, 2)),
        oracles::random_complex_vec(2, 9u), 1.0);
    SpaceTimeField w = l1_embed(oracles::random_complex_vec(2, 10u), kNt);
    CHECK(field_max_diff(apply_T1(stub, w), time_derivative(w)) < 1e-15);
  }

  SUBCASE("T1 l1_embed(psi) = l1_embed((i - A_c) psi) on random mode-1 fields") {
    auto P = ex2_build({});
    for (unsigned seed : {71u, 72u, 73u}) {
      SpatialVectorC psi = oracles::random_complex_vec(P->dim(), seed);
      SpaceTimeField lhs = apply_T1(*P, l1_embed(psi, kNt));
      SpatialVectorC ipsi = Complex(0, 1) * psi - P->apply_A_c(psi);
      SpaceTimeField rhs = l1_embed(ipsi, kNt);
      CHECK(norm_Y(*P, lhs - rhs) <= 1e-10 * norm_Y(*P, rhs));
    }
  }

  SUBCASE("non-mode-1 input is a domain error") {
    auto P = ex2_build({});
    SpaceTimeField w = oracles::random_field(kNt, P->nx(), 81u, 2, 2);
    CHECK_THROWS_AS((void)apply_T1(*P, w), std::domain_error);
  }
}

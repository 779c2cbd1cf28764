#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "filmcascade/stability.hpp"

using namespace filmcascade;

TEST_CASE("dispersion vanishes at k = 0 and is conjugate-symmetric") {
  const ScalingParams p = make_params(0.1, 0.1, 0.7, 0.3, 0.5);
  for (ModelKind k : {ModelKind::Burgers, ModelKind::KdVBurgers, ModelKind::Kawahara, ModelKind::Benney}) {
    CHECK(std::abs(dispersion(k, 0.0, p)) == 0.0);
    for (double kk : {0.3, 1.0, 6.283185307179586}) {
      CHECK(std::abs(dispersion(k, -kk, p) - std::conj(dispersion(k, kk, p))) < 1e-13);
    }
  }
}

TEST_CASE("burgers dispersion at unit wavenumber") {
  const ScalingParams p = make_params(0.1, 0.1, 0.0, 0.1, std::numbers::pi / 4);
  const cplx lam = dispersion(ModelKind::Burgers, 1.0, p);
  CHECK(lam.real() == doctest::Approx(-1.0 / 15.0).epsilon(1e-14));
  CHECK(lam.imag() == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("kawahara growth changes sign at the marginal wavenumber") {
  const ScalingParams p = make_params(0.1, 0.1, 3.0, 0.5, 0.6);
  const ModelCoefficients c = benney_coefficients(p.alpha, p.reynolds, p.weber);
  REQUIRE(c.B1 < 0.0);
  REQUIRE(c.G1 < 0.0);
  const double kn = std::sqrt(c.B1 / (p.delta * p.delta * c.G1));
  CHECK(std::abs(dispersion(ModelKind::Kawahara, kn, p).real()) < 1e-10);
  CHECK(dispersion(ModelKind::Kawahara, 0.5 * kn, p).real() > 0.0);
  CHECK(dispersion(ModelKind::Kawahara, 2.0 * kn, p).real() < 0.0);
}

TEST_CASE("critical reynolds number") {
  const CriticalReynolds a = critical_reynolds(std::numbers::pi / 4);
  CHECK(std::abs(a.closed_form - 1.25) < 1e-14);
  CHECK(std::abs(a.bisection - 1.25) < 1e-12);
  CHECK(std::abs(critical_reynolds(std::atan(1.25)).closed_form - 1.0) < 1e-14);
  CHECK_THROWS(critical_reynolds(0.0));
  CHECK_THROWS(critical_reynolds(-0.1));
  CHECK(critical_reynolds(1e-7).diverging);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.05, 1.5);
  for (int i = 0; i < 20; ++i) {
    const double alpha = U(rng);
    const CriticalReynolds r = critical_reynolds(alpha);
    CHECK(std::abs(r.bisection - r.closed_form) <= 1e-12 * std::max(1.0, r.closed_form));
    CHECK(std::abs(benney_coefficients(alpha, r.closed_form, 1.0).B1) < 1e-12);
  }
}

TEST_CASE("model neutral reynolds matches the critical value in the long-wave limit") {
  const ScalingParams p = make_params(0.05, 0.1, 1.0, 0.1, std::numbers::pi / 4);
  const double r = model_neutral_reynolds(ModelKind::Burgers, 0.1, p, 0.5, 2.0);
  CHECK(r == doctest::Approx(1.25).epsilon(1e-10));
  CHECK_THROWS(model_neutral_reynolds(ModelKind::Burgers, 0.1, p, 2.0, 3.0));
}

TEST_CASE("orr-sommerfeld spectrum brackets the critical reynolds number") {
  OSProblem prob;
  prob.k = 0.1;
  prob.params = make_params(0.05, 0.0, 1.10, 0.1, std::numbers::pi / 4);
  const cplx lo = leading_os_eigenvalue(prob);
  prob.params.reynolds = 1.40;
  const cplx hi = leading_os_eigenvalue(prob);
  CHECK(lo.real() < 0.0);
  CHECK(hi.real() > 0.0);
}

TEST_CASE("orr-sommerfeld leading eigenvalue matches model dispersion at small delta k") {
  OSProblem prob;
  prob.k = 0.5;
  prob.params = make_params(0.05, 0.0, 0.5, 0.1, std::numbers::pi / 4);
  const cplx os = leading_os_eigenvalue(prob);
  const cplx model = dispersion(ModelKind::Kawahara, prob.k, prob.params);
  CHECK(std::abs(os - model) <= 0.05 * std::abs(model));
  CHECK(std::abs(os.real() - model.real()) <= 0.05 * std::abs(model.real()));
}

TEST_CASE("orr-sommerfeld reference eigenvalue at moderate delta") {
  OSProblem prob;
  prob.k = 2.0 * std::numbers::pi;
  prob.params = make_params(0.1, 0.0, 0.1, 0.1, 0.3);
  const std::vector<cplx> ev = os_spectrum(prob);
  REQUIRE(ev.size() >= 2);
  CHECK(ev[0].real() == doctest::Approx(-5.2187).epsilon(1e-4));
  CHECK(ev[0].imag() == doctest::Approx(-9.8114).epsilon(1e-4));
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i].real() <= ev[i - 1].real());
}

TEST_CASE("orr-sommerfeld growth increases with reynolds number") {
  OSProblem prob;
  prob.k = 0.5;
  prob.params = make_params(0.1, 0.0, 0.0, 0.1, std::numbers::pi / 4);
  const double rc = 1.25;
  double prev = -1e300;
  for (int i = 0; i < 10; ++i) {
    prob.params.reynolds = rc * (0.5 + i / 9.0);
    const double g = leading_os_eigenvalue(prob).real();
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("orr-sommerfeld rejects bad problems") {
  OSProblem prob;
  prob.k = 0.0;
  prob.params = make_params(0.1, 0.0, 0.1, 0.1, 0.3);
  CHECK_THROWS(os_spectrum(prob));
  prob.k = 1.0;
  prob.ny = 16;
  CHECK_THROWS(os_spectrum(prob));
}

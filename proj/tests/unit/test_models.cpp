#include <cmath>
#include <numbers>

#include "doctest.h"
#include "filmcascade/models.hpp"
#include "filmcascade/stability.hpp"

using namespace filmcascade;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ModelState single_mode(ModelKind kind, const ScalingParams& p, int nx, int n, double a) {
  ModelState s;
  s.kind = kind;
  s.params = p;
  s.eta = SurfaceField(nx);
  s.eta.coef[n] = 0.5 * a;
  return s;
}

}  // namespace

TEST_CASE("model coefficients at reference angles") {
  CHECK(std::abs(benney_coefficients(std::numbers::pi / 4, 0.0, 0.3).B1 - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(benney_coefficients(0.4, 0.0, 0.3).D1 + 2.0) < 1e-14);
  CHECK(std::abs(benney_coefficients(std::numbers::pi / 2, 0.0, 1.0).G1 + 2.0 / 3.0) < 1e-14);
  // The vertical film loses the 1/tan terms smoothly.
  const ModelCoefficients v = benney_coefficients(std::numbers::pi / 2, 0.7, 0.2);
  CHECK(std::isfinite(v.B1));
  CHECK(v.B1 == doctest::Approx(-8.0 * 0.7 / 15.0).epsilon(1e-14));
}

TEST_CASE("zero and constant surfaces are fixed points") {
  const ScalingParams p = make_params(0.1, 0.2, 0.3, 0.1, 0.3);
  for (ModelKind k : {ModelKind::Burgers, ModelKind::KdVBurgers, ModelKind::Kawahara, ModelKind::Benney}) {
    ModelState s = single_mode(k, p, 32, 1, 0.0);
    for (const cplx& c : model_rhs(s).coef) CHECK(std::abs(c) == 0.0);
    s.eta.coef[0] = 0.3;
    for (const cplx& c : model_rhs(s).coef) CHECK(std::abs(c) < 1e-15);
  }
}

TEST_CASE("linear burgers right-hand side of a cosine") {
  const ScalingParams p = make_params(0.1, 0.0, 0.0, 0.1, std::numbers::pi / 4);
  const ModelState s = single_mode(ModelKind::Burgers, p, 32, 1, 1.0);
  const SurfaceField r = model_rhs(s);
  // 2 (2 pi) sin(2 pi x) - 0.1 (2/3) (2 pi)^2 cos(2 pi x)
  const cplx expect = 0.5 * cplx(-0.1 * (2.0 / 3.0) * kTwoPi * kTwoPi, -2.0 * kTwoPi);
  CHECK(std::abs(r.coef[1] - expect) < 1e-12);
  for (int n = 2; n < r.nmodes(); ++n) CHECK(std::abs(r.coef[n]) < 1e-14);
}

TEST_CASE("kawahara minus kdv-burgers is the fourth-order term") {
  const ScalingParams p = make_params(0.2, 0.3, 0.4, 0.5, 0.6);
  const ModelCoefficients c = benney_coefficients(p.alpha, p.reynolds, p.weber);
  ModelState a = single_mode(ModelKind::Kawahara, p, 32, 1, 0.1);
  a.eta.coef[3] = {0.02, -0.01};
  ModelState b = a;
  b.kind = ModelKind::KdVBurgers;
  const SurfaceField ra = model_rhs(a), rb = model_rhs(b);
  for (int n = 0; n < ra.nmodes(); ++n) {
    const double k = kTwoPi * n;
    const cplx expect = std::pow(p.delta, 3) * c.G1 * std::pow(k, 4) * a.eta.coef[n];
    CHECK(std::abs(ra.coef[n] - rb.coef[n] - expect) < 1e-10 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("dispersion equals the linear symbol of the right-hand side") {
  const ScalingParams p = make_params(0.1, 0.0, 0.4, 0.5, 0.6);
  for (ModelKind k : {ModelKind::Burgers, ModelKind::KdVBurgers, ModelKind::Kawahara, ModelKind::Benney}) {
    for (int n = 1; n <= 5; ++n) {
      const double h = 1e-7;
      ModelState s = single_mode(k, p, 32, n, 0.0);
      s.eta.coef[n] = h;
      const cplx sym = model_rhs(s).coef[n] / h;
      const cplx lam = dispersion(k, kTwoPi * n, p);
      // Benney is nonlinear even at epsilon = 0; the finite amplitude costs O(h).
      CHECK(std::abs(sym - lam) < 1e-5 * std::abs(lam));
    }
  }
}

TEST_CASE("linear single-mode run follows the exact exponential") {
  const ScalingParams p = make_params(0.1, 0.0, 0.0, 0.1, std::numbers::pi / 4);
  const ModelCoefficients c = benney_coefficients(p.alpha, p.reynolds, p.weber);
  const ModelState s0 = single_mode(ModelKind::Burgers, p, 32, 1, 1e-3);
  const ModelState s1 = advance_model(s0, 1.0);
  const double ratio = std::abs(s1.eta.coef[1]) / std::abs(s0.eta.coef[1]);
  CHECK(std::abs(ratio / std::exp(-p.delta * c.B1 * kTwoPi * kTwoPi) - 1.0) < 1e-10);
}

TEST_CASE("mass is conserved over a thousand steps") {
  const ScalingParams p = make_params(0.1, 0.5, 0.3, 0.1, 0.3);
  for (ModelKind k : {ModelKind::Burgers, ModelKind::KdVBurgers, ModelKind::Kawahara}) {
    ModelState s = single_mode(k, p, 32, 1, 0.2);
    s.eta.coef[0] = 0.05;
    s.eta.coef[2] = 0.03;
    ModelStepper st(k, p, 32);
    for (int i = 0; i < 1000; ++i) s = st.step(s, 1e-3);
    CHECK(std::abs(s.eta.coef[0].real() - 0.05) < 1e-10);
  }
}

TEST_CASE("benney rejects a ruptured film") {
  const ScalingParams p = make_params(0.1, 1.0, 0.3, 0.1, 0.3);
  const ModelState s = single_mode(ModelKind::Benney, p, 32, 1, 2.5);
  CHECK_THROWS_AS(model_rhs(s), FilmRuptureError);
}

TEST_CASE("below the critical reynolds number every burgers mode decays monotonically") {
  const ScalingParams p = make_params(0.1, 0.0, 0.5, 0.1, std::numbers::pi / 4);
  ModelState s = single_mode(ModelKind::Burgers, p, 32, 1, 0.0);
  for (int n = 1; n <= 8; ++n) s.eta.coef[n] = 1e-3;
  ModelStepper st(ModelKind::Burgers, p, 32);
  std::vector<double> prev(9, 1e-3);
  for (int i = 0; i < 50; ++i) {
    s = st.step(s, 1e-2);
    for (int n = 1; n <= 8; ++n) {
      CHECK(std::abs(s.eta.coef[n]) < prev[n]);
      prev[n] = std::abs(s.eta.coef[n]);
    }
  }
}

TEST_CASE("model kinds parse from their names") {
  CHECK(parse_model_kind("burgers") == ModelKind::Burgers);
  CHECK(parse_model_kind("kdvb") == ModelKind::KdVBurgers);
  CHECK(parse_model_kind("kawahara") == ModelKind::Kawahara);
  CHECK(parse_model_kind("benney") == ModelKind::Benney);
  CHECK_THROWS(parse_model_kind("kdv"));
}

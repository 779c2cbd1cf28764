#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "filmcascade/params.hpp"

using namespace filmcascade;

namespace {

PhysicalParams water() {
  PhysicalParams p;
  p.rho = 1000.0;
  p.g = 9.8;
  p.alpha = std::numbers::pi / 2;
  p.mu = 1e-3;
  p.sigma = 0.072;
  p.h0 = 1e-4;
  p.l0 = 1e-2;
  p.a0 = 1e-5;
  return p;
}

}  // namespace

TEST_CASE("weber number of a water film") {
  const ScalingParams s = nondimensionalize(water());
  CHECK(s.weber == doctest::Approx(0.072 / (1000.0 * 9.8 * 1e-8)).epsilon(1e-14));
  CHECK(s.weber == doctest::Approx(734.7).epsilon(1e-4));
}

TEST_CASE("delta and epsilon are ratios of the length scales") {
  PhysicalParams p = water();
  p.l0 = p.h0;
  CHECK(nondimensionalize(p).delta == 1.0);
  p = water();
  p.a0 = p.h0;
  CHECK(nondimensionalize(p).epsilon == 1.0);
}

TEST_CASE("nonpositive physical input is rejected") {
  PhysicalParams p = water();
  p.mu = 0.0;
  CHECK_THROWS_AS(nondimensionalize(p), ParameterError);
  p = water();
  p.h0 = -1.0;
  CHECK_THROWS_AS(nondimensionalize(p), ParameterError);
  p = water();
  p.alpha = 2.0;
  CHECK_THROWS_AS(nondimensionalize(p), ParameterError);
}

TEST_CASE("nusselt profile values") {
  CHECK(nusselt(0.0).u == 0.0);
  CHECK(nusselt(0.0).uy == 2.0);
  CHECK(nusselt(1.0).u == 1.0);
  CHECK(nusselt(1.0).uy == 0.0);
  CHECK(nusselt(0.5).u == 0.75);
  CHECK(nusselt(0.5).uy == 1.0);
  CHECK_THROWS_AS(nusselt(1.5), DomainError);
  CHECK_THROWS_AS(nusselt(-0.1), DomainError);
}

TEST_CASE("dimensional nusselt profile rescales to the unit profile") {
  const PhysicalParams p = water();
  const ScalingParams s = nondimensionalize(p);
  for (int k = 0; k <= 10; ++k) {
    const double y = 0.1 * k;
    CHECK(nusselt_dimensional(p, y * p.h0) / s.U0 == doctest::Approx(nusselt(y).u).epsilon(1e-14));
  }
}

TEST_CASE("scaling identities hold for random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  for (int t = 0; t < 50; ++t) {
    PhysicalParams p;
    p.rho = 1000.0 * U(rng);
    p.g = 9.8 * U(rng);
    p.alpha = 0.7 * U(rng);
    p.mu = 1e-3 * U(rng);
    p.sigma = 0.07 * U(rng);
    p.h0 = 1e-4 * U(rng);
    p.l0 = 1e-2 * U(rng);
    p.a0 = 1e-5 * U(rng);
    const ScalingParams s = nondimensionalize(p);
    const double U0 = p.rho * p.g * std::sin(p.alpha) * p.h0 * p.h0 / (2.0 * p.mu);
    CHECK(s.U0 == doctest::Approx(U0).epsilon(1e-14));
    CHECK(s.V0 == doctest::Approx(s.delta * U0).epsilon(1e-14));
    CHECK(s.t0 == doctest::Approx(p.l0 / U0).epsilon(1e-14));
    CHECK(s.reynolds == doctest::Approx(p.rho * U0 * p.h0 / p.mu).epsilon(1e-14));
    CHECK(s.weber == doctest::Approx(p.sigma / (p.rho * p.g * p.h0 * p.h0)).epsilon(1e-14));
    CHECK(s.has_scales);
  }
}

TEST_CASE("nondimensional bundles accept the linear and creeping limits") {
  CHECK_NOTHROW(make_params(0.1, 0.0, 0.0, 0.0, 0.3));
  CHECK_THROWS_AS(make_params(0.1, 1.5, 0.1, 0.1, 0.3), ParameterError);
  CHECK_THROWS_AS(make_params(0.0, 0.1, 0.1, 0.1, 0.3), ParameterError);
  const ScalingParams vertical = make_params(0.1, 0.1, 0.1, 0.1, std::numbers::pi / 2);
  CHECK(vertical.inv_tan_alpha() == 0.0);
  CHECK_THROWS_AS(vertical.validate_ns(), ParameterError);
  CHECK_THROWS_AS(make_params(0.1, 0.1, 0.0, 0.1, 0.3).validate_ns(), ParameterError);
}

TEST_CASE("weber window flag") {
  const ScalingParams s = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  CHECK(s.weber_in_window());
  CHECK_FALSE(s.weber_in_window(1.0, 1e3));
  CHECK(s.surface_tension() == doctest::Approx(1e-3));
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "filmcascade/pressure.hpp"

using namespace filmcascade;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("delta-laplacian recovers a harmonic mode") {
  const Grid g(16, 48);
  for (double delta : {0.1, 0.5, 1.0}) {
    const DeltaPoisson solver(g, delta);
    const double top = std::cosh(kTwoPi * delta);
    const std::vector<double> phi =
        g.surface_from_function([&](double x) { return std::cos(kTwoPi * x) * top; });
    const BulkField q = solver.solve(g.zeros(), phi);
    const BulkField exact =
        g.from_function([&](double x, double y) { return std::cos(kTwoPi * x) * std::cosh(kTwoPi * delta * y); });
    CHECK(max_abs(q - exact) < 1e-8);
  }
}

TEST_CASE("fixed-point pressure solver on harmonic data") {
  const Grid g(16, 48);
  const double delta = 0.3;
  PressureData d;
  d.delta = delta;
  d.g = g.zeros();
  d.g0 = g.zeros();
  d.n6 = {g.zeros(), g.zeros(), g.zeros(), g.zeros()};
  d.phi = std::vector<double>(g.nx(), 0.0);
  PressureInfo info;
  CHECK(max_abs(solve_pressure(g, d, {}, &info)) == 0.0);

  d.phi = g.surface_from_function([&](double x) { return std::cos(kTwoPi * x) * std::cosh(kTwoPi * delta); });
  const BulkField p = solve_pressure(g, d, {}, &info);
  const BulkField exact =
      g.from_function([&](double x, double y) { return std::cos(kTwoPi * x) * std::cosh(kTwoPi * delta * y); });
  CHECK(max_abs(p - exact) < 1e-8);
  CHECK(info.iterations >= 1);
}

TEST_CASE("pressure under a linear film surface") {
  const Grid g(16, 48);
  const double a = 1e-2, delta = 0.1, W = 0.3, alpha = 0.4;
  const ScalingParams prm = make_params(delta, 0.0, 0.2, W, alpha);
  NSState s = zero_state(g, prm);
  s.eta.coef[1] = 0.5 * a;
  const BulkField p = pressure_of_state(g, s);
  const double amp = a / std::tan(alpha) + delta * delta * W * a * kTwoPi * kTwoPi / std::sin(alpha);
  const BulkField exact = g.from_function([&](double x, double y) {
    return amp * std::cos(kTwoPi * x) * std::cosh(kTwoPi * delta * y) / std::cosh(kTwoPi * delta);
  });
  CHECK(max_abs(p - exact) < 1e-8 * std::max(1.0, amp));
}

TEST_CASE("zero state has zero pressure") {
  const Grid g(16, 24);
  const NSState s = zero_state(g, make_params(0.1, 0.3, 0.2, 0.1, 0.4));
  CHECK(max_abs(pressure_of_state(g, s)) == 0.0);
}

TEST_CASE("a non-contracting fixed point is reported") {
  const Grid g(16, 24);
  PressureData d;
  d.delta = 0.5;
  d.g = g.zeros();
  d.g0 = g.zeros();
  d.phi = g.surface_from_function([](double x) { return std::cos(kTwoPi * x); });
  // A variable A6 - I of size above one makes the iteration map expansive.
  const BulkField m = g.from_function([](double x, double y) { return 3.0 * std::cos(kTwoPi * x) * y; });
  d.n6 = {m, g.zeros(), g.zeros(), m};
  CHECK_THROWS_AS(solve_pressure(g, d), PressureSolverError);
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "filmcascade/nssolver.hpp"
#include "filmcascade/stability.hpp"

using namespace filmcascade;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double state_max(const NSState& s) {
  double m = std::max({max_abs(s.u), max_abs(s.v), max_abs(s.p)});
  for (const cplx& c : s.eta.coef) m = std::max(m, std::abs(c));
  return m;
}

SurfaceField cosine(int nx, double a) {
  SurfaceField s(nx);
  s.coef[1] = 0.5 * a;
  return s;
}

}  // namespace

TEST_CASE("compatibility of initial data") {
  const Grid g(32, 24);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  const CompatibilityReport z = check_compatibility(g, zero_state(g, p));
  CHECK(z.pass);
  CHECK(z.divergence == 0.0);
  CHECK(z.tangential == 0.0);
  CHECK(z.no_slip == 0.0);

  const NSState c = compatible_initial_state(g, cosine(g.nx(), 0.05), p);
  const CompatibilityReport cr = check_compatibility(g, c);
  CHECK(cr.pass);
  CHECK(cr.divergence < 1e-8);
  CHECK(cr.tangential < 1e-8);

  NSState bad = zero_state(g, p);
  bad.u = g.from_function([](double x, double y) { return std::sin(kTwoPi * x) * y; });
  const CompatibilityReport br = check_compatibility(g, bad);
  CHECK_FALSE(br.pass);
  CHECK(br.divergence > 1.0);
}

TEST_CASE("the zero state is a fixed point") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  for (NSScheme sc : {NSScheme::IMEX1, NSScheme::CNAB2, NSScheme::SBDF2}) {
    NSOptions o;
    o.scheme = sc;
    NSStepper st(g, p, o);
    NSState s = zero_state(g, p);
    for (int i = 0; i < 1000; ++i) st.step(s);
    CHECK(state_max(s) < 1e-12);
    CHECK(s.t == doctest::Approx(1000 * st.dt()));
  }
}

TEST_CASE("a step keeps the velocity solenoidal, no-slip and mass-conserving") {
  const Grid g(32, 24);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  SurfaceField eta = cosine(g.nx(), 0.1);
  eta.coef[0] = 0.02;
  eta.coef[2] = {0.01, -0.02};
  NSState s = compatible_initial_state(g, eta, p);
  NSStepper st(g, p);
  StepInfo info;
  for (int i = 0; i < 50; ++i) {
    st.step(s, &info);
    CHECK(info.divergence < 1e-9);
  }
  CHECK(check_compatibility(g, s).no_slip < 1e-13);  // wall rows are solved, so only rounding remains
  CHECK(std::abs(s.eta.coef[0].real() - 0.02) < 1e-10);
  CHECK(default_dt(g) == doctest::Approx(0.5 / 32));
}

TEST_CASE("linear growth rate follows the leading stability eigenvalue") {
  const Grid g(16, 24);
  const ScalingParams p = make_params(0.1, 0.0, 0.1, 0.1, 0.3);
  OSProblem prob;
  prob.k = kTwoPi;
  prob.params = p;
  const double expect = leading_os_eigenvalue(prob).real();

  NSOptions o;
  o.dt = 1.0 / 128;
  NSStepper st(g, p, o);
  NSState s = compatible_initial_state(g, cosine(g.nx(), 1e-6), p);
  // Let the fast modes die out, then measure over one time unit.
  while (s.t < 0.5 - 1e-12) st.step(s);
  const double a0 = std::abs(s.eta.coef[1]), t0 = s.t;
  while (s.t < 1.5 - 1e-12) st.step(s);
  const double rate = std::log(std::abs(s.eta.coef[1]) / a0) / (s.t - t0);
  CHECK(std::abs(rate - expect) <= 0.05 * std::abs(expect));
}

TEST_CASE("step_ns takes one step") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  const NSState s0 = compatible_initial_state(g, cosine(g.nx(), 0.05), p);
  const NSState s1 = step_ns(g, s0, 1e-3);
  CHECK(s1.t == doctest::Approx(1e-3));
  CHECK(std::abs(s1.eta.coef[1] - s0.eta.coef[1]) > 0.0);
  CHECK(std::abs(s1.eta.coef[1] - s0.eta.coef[1]) < 1e-3);
}

TEST_CASE("run with zero duration keeps only the initial snapshot") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  const NSState s0 = compatible_initial_state(g, cosine(g.nx(), 0.05), p);
  NSRunOptions o;
  o.t_end = 0.0;
  const NSTrajectory tr = run_ns(g, s0, o);
  REQUIRE(tr.snapshots.size() == 1);
  CHECK(tr.snapshots[0].t == 0.0);
  CHECK(state_max(tr.snapshots[0]) == state_max(s0));
  CHECK_FALSE(tr.blew_up);
}

TEST_CASE("a small mean-zero film decays and runs reproducibly") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  SurfaceField eta = cosine(g.nx(), 0.05);
  eta.coef[2] = {0.0, 0.02};
  const NSState s0 = compatible_initial_state(g, eta, p);
  NSRunOptions o;
  o.t_end = 1.0;
  o.diag_every = 8;
  const NSTrajectory a = run_ns(g, s0, o);
  const NSTrajectory b = run_ns(g, s0, o);
  REQUIRE_FALSE(a.blew_up);
  REQUIRE(a.rows.size() >= 2);
  CHECK(a.rows.back().E2 < a.rows.front().E2);
  CHECK(a.rows.back().t == doctest::Approx(1.0));
  CHECK(trajectory_csv(a) == trajectory_csv(b));
}

TEST_CASE("rates of the zero state vanish") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  const NSRates r = ns_rates(g, zero_state(g, p));
  CHECK(max_abs(r.u_t) == 0.0);
  CHECK(max_abs(r.v_t) == 0.0);
  CHECK(max_abs(r.p_t) == 0.0);
  for (const cplx& c : r.eta_t.coef) CHECK(std::abs(c) == 0.0);
}

// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "filmcascade/diagnostics.hpp"
#include "filmcascade/harness.hpp"
#include "filmcascade/models.hpp"
#include "filmcascade/nssolver.hpp"
#include "filmcascade/pressure.hpp"
#include "filmcascade/stability.hpp"
#include "filmcascade/transform.hpp"

using namespace filmcascade;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double state_max(const NSState& s) {
  double m = std::max({max_abs(s.u), max_abs(s.v), max_abs(s.p)});
  for (const cplx& c : s.eta.coef) m = std::max(m, std::abs(c));
  return m;
}

Outcome coefficients() {
  const double b1 = benney_coefficients(kPi / 4, 0.0, 0.3).B1;
  const double d1 = benney_coefficients(0.7, 0.0, 0.3).D1;
  const double g1 = benney_coefficients(kPi / 2, 0.0, 1.0).G1;
  const double rc = critical_reynolds(kPi / 4).closed_form;
  const double err = std::max({std::abs(b1 - 2.0 / 3.0), std::abs(d1 + 2.0), std::abs(g1 + 2.0 / 3.0),
                               std::abs(rc - 1.25)});
  return {err <= 1e-14, "max deviation " + num(err)};
}

Outcome critical_bracket() {
  OSProblem prob;
  prob.k = 0.1;
  prob.params = make_params(0.05, 0.0, 1.10, 0.1, kPi / 4);
  const double lo = leading_os_eigenvalue(prob).real();
  prob.params.reynolds = 1.40;
  const double hi = leading_os_eigenvalue(prob).real();
  const double rn = os_neutral_reynolds(prob, 1.10, 1.40, 1e-8);
  const double rel = std::abs(rn - 1.25) / 1.25;
  return {lo < 0.0 && hi > 0.0 && rel < 0.03,
          "Re at R=1.10: " + num(lo) + ", at R=1.40: " + num(hi) + ", neutral R " + num(rn, 6) +
              " (" + num(100 * rel, 3) + "% from 1.25)"};
}

Outcome linear_exactness() {
  const ScalingParams p = make_params(0.1, 0.0, 0.5, 0.2, 0.3);
  double worst = 0.0;
  for (ModelKind k : {ModelKind::Burgers, ModelKind::KdVBurgers, ModelKind::Kawahara, ModelKind::Benney}) {
    for (int n = 1; n <= 3; ++n) {
      ModelState s;
      s.kind = k;
      s.params = p;
      s.eta = SurfaceField(32);
      s.eta.coef[n] = 5e-4;
      // The Benney flux is nonlinear in eta itself, so it is linearised explicitly.
      AdvanceOptions o;
      o.stepper.linear_only = k == ModelKind::Benney;
      const ModelState e = advance_model(s, 1.0, o);
      const cplx exact = s.eta.coef[n] * std::exp(dispersion(k, kTwoPi * n, p));
      worst = std::max(worst, std::abs(e.eta.coef[n] - exact) / std::abs(exact));
    }
  }
  return {worst < 1e-8, "max relative error " + num(worst)};
}

Outcome mass() {
  const ScalingParams p = make_params(0.1, 0.5, 0.3, 0.1, 0.3);
  double worst = 0.0;
  for (ModelKind k : {ModelKind::Burgers, ModelKind::KdVBurgers, ModelKind::Kawahara, ModelKind::Benney}) {
    ModelState s;
    s.kind = k;
    s.params = p;
    s.eta = SurfaceField(32);
    s.eta.coef[0] = 0.05;
    s.eta.coef[1] = 0.1;
    s.eta.coef[2] = {0.0, 0.03};
    ModelStepper st(k, p, 32);
    for (int i = 0; i < 1000; ++i) s = st.step(s, 1e-3);
    worst = std::max(worst, std::abs(s.eta.coef[0].real() - 0.05));
  }
  const Grid g(32, 24);
  const ScalingParams q = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
  SurfaceField eta(g.nx());
  eta.coef[0] = 0.02;
  eta.coef[1] = 0.05;
  eta.coef[3] = {0.01, 0.01};
  NSState s = compatible_initial_state(g, eta, q);
  NSStepper st(g, q);
  for (int i = 0; i < 1000; ++i) st.step(s);
  const double ns = std::abs(s.eta.coef[0].real() - 0.02);
  return {std::max(worst, ns) < 1e-10, "models " + num(worst) + ", NS " + num(ns)};
}

Outcome extension() {
  std::vector<double> deltas;
  for (int k = 0; k <= 8; ++k) deltas.push_back(std::ldexp(1.0, -k));
  ExtensionAuditOptions o;
  o.deltas = deltas;
  o.trials = 50;
  const std::vector<ExtensionAuditRow> base = extension_audit(o);
  // x-norms are exact by Parseval, so Nx doubling can only move the
  // y-quadrature; the ny doubling is the check with teeth.
  o.nx *= 2;
  const std::vector<ExtensionAuditRow> fine_x = extension_audit(o);
  o.nx /= 2;
  o.ny *= 2;
  const std::vector<ExtensionAuditRow> fine_y = extension_audit(o);
  auto drift_of = [&](const std::vector<ExtensionAuditRow>& fine) {
    double drift = fine.size() == base.size() ? 0.0 : 1.0;
    for (std::size_t i = 0; i < base.size() && i < fine.size(); ++i)
      for (auto [a, b] : {std::pair{base[i].ratio_plain, fine[i].ratio_plain},
                          std::pair{base[i].ratio_half, fine[i].ratio_half}})
        if (a > 0.0) drift = std::max(drift, std::abs(b - a) / a);
    return drift;
  };
  double worst = 0.0;
  for (const ExtensionAuditRow& r : base) worst = std::max({worst, r.ratio_plain, r.ratio_half});
  const double dx = drift_of(fine_x), dy = drift_of(fine_y);
  return {worst <= 10.0 && dx < 0.01 && dy < 0.01,
          "max ratio " + num(worst) + " (gate 10), drift under Nx doubling " + num(100 * dx, 3) +
              "%, under ny doubling " + num(100 * dy, 3) + "%"};
}

Outcome korn() {
  AuditOptions o;
  o.trials = 100;
  double worst = 0.0;
  for (const AuditRow& r : korn_audit(o)) worst = std::max(worst, r.worst);
  return {worst <= 3.0 + 1e-6, "max ratio " + num(worst, 6)};
}

Outcome trace() {
  AuditOptions o;
  o.trials = 100;
  double lo = 1e300, hi = 0.0, slo = 1e300, shi = 0.0;
  std::string per;
  for (const AuditRow& r : trace_audit(o)) {
    lo = std::min(lo, r.worst);
    hi = std::max(hi, r.worst);
    const double s = trace_supremum(r.delta, o.band);
    slo = std::min(slo, s);
    shi = std::max(shi, s);
    per += " " + num(r.worst, 4);
  }
  const double spread = (hi - lo) / hi;
  return {spread < 0.2, "maxima" + per + ", spread " + num(100 * spread, 3) + "% (exact supremum spread " +
                            num(100 * (shi - slo) / shi, 3) + "%)"};
}

Outcome pressure() {
  const Grid g(16, 48);
  const double delta = 0.3;
  const DeltaPoisson solver(g, delta);
  const std::vector<double> phi =
      g.surface_from_function([&](double x) { return std::cos(kTwoPi * x) * std::cosh(kTwoPi * delta); });
  const BulkField exact =
      g.from_function([&](double x, double y) { return std::cos(kTwoPi * x) * std::cosh(kTwoPi * delta * y); });
  const double harm = max_abs(solver.solve(g.zeros(), phi) - exact);

  PressureData d;
  d.delta = delta;
  d.g = g.zeros();
  d.g0 = g.zeros();
  d.n6 = {g.zeros(), g.zeros(), g.zeros(), g.zeros()};
  d.phi = std::vector<double>(g.nx(), 0.0);
  const double zero = max_abs(solve_pressure(g, d));

  const double a = 1e-2, dl = 0.1, W = 0.3, alpha = 0.4;
  NSState s = zero_state(g, make_params(dl, 0.0, 0.2, W, alpha));
  s.eta.coef[1] = 0.5 * a;
  const double amp = a / std::tan(alpha) + dl * dl * W * a * kTwoPi * kTwoPi / std::sin(alpha);
  const BulkField film = g.from_function([&](double x, double y) {
    return amp * std::cos(kTwoPi * x) * std::cosh(kTwoPi * dl * y) / std::cosh(kTwoPi * dl);
  });
  const double lin = max_abs(pressure_of_state(g, s) - film);
  return {harm < 1e-8 && zero < 1e-12 && lin < 1e-8,
          "harmonic " + num(harm) + ", zero data " + num(zero) + ", film mode " + num(lin)};
}

Outcome ns_linear() {
  const Grid g(32, 24);
  const ScalingParams p = make_params(0.1, 0.0, 0.1, 0.1, 0.3);
  NSState z = zero_state(g, p);
  {
    const ScalingParams q = make_params(0.1, 0.1, 0.1, 0.1, 0.3);
    z = zero_state(g, q);
    NSStepper st(g, q);
    for (int i = 0; i < 1000; ++i) st.step(z);
  }
  const double zmax = state_max(z);

  OSProblem prob;
  prob.k = kTwoPi;
  prob.params = p;
  const double expect = leading_os_eigenvalue(prob).real();
  NSOptions o;
  o.dt = 1.0 / 64;
  NSStepper st(g, p, o);
  SurfaceField eta(g.nx());
  eta.coef[1] = 0.5e-6;
  NSState s = compatible_initial_state(g, eta, p);
  while (s.t < 0.5 - 1e-12) st.step(s);
  const double a0 = std::abs(s.eta.coef[1]), t0 = s.t;
  while (s.t < 2.0 - 1e-12) st.step(s);
  const double rate = std::log(std::abs(s.eta.coef[1]) / a0) / (s.t - t0);
  const double rel = std::abs(rate - expect) / std::abs(expect);
  return {zmax < 1e-12 && rel <= 0.05, "zero state max " + num(zmax) + ", rate " + num(rate, 5) +
                                           " vs eigenvalue " + num(expect, 5) + " (" + num(100 * rel, 3) +
                                           "%)"};
}

// Shared delta sweep for the energy criteria.
const SweepResult& sweep() {
  static const SweepResult r = sweep_delta(parse_config(
      "[params]\ndeltas = 0.2, 0.1, 0.05, 0.025\nepsilon_rule = delta\n"
      "reynolds = 0.1\nweber = 0.1\nalpha = 0.3\n"
      "[resolution]\nnx = 32\nny = 24\n"
      "[run]\nt_end = 4\ncadence = 4\n"
      "[initial]\nmodes = 1:0.01, 2:0.005\n"));
  return r;
}

Outcome energy_decay() {
  const SweepResult& r = sweep();
  bool monotone = true, negative = true;
  double lo = 1e300, hi = 0.0;
  std::string per;
  for (const SweepRow& row : r.rows) {
    if (row.delta < 0.05 - 1e-12) continue;
    monotone = monotone && row.monotone && !row.blew_up;
    negative = negative && row.decay_rate > 0.0;
    lo = std::min(lo, row.decay_per_delta);
    hi = std::max(hi, row.decay_per_delta);
    per += " " + num(row.decay_per_delta, 4);
  }
  const double ratio = hi / lo;
  return {monotone && negative && ratio <= 2.0,
          std::string("monotone ") + (monotone ? "yes" : "no") + ", rate/delta" + per + ", max/min " +
              num(ratio, 4) + " (gate 2)"};
}

Outcome uniformity() {
  const SweepResult& r = sweep();
  std::string per;
  for (const SweepRow& row : r.rows) per += " " + num(row.sup_Etilde2, 4);
  return {r.uniformity_ratio < 2.0 && r.rows.size() == 4,
          "sup E~2" + per + ", max/min " + num(r.uniformity_ratio, 4) + " (gate 2)"};
}

Outcome truncation() {
  const std::string base =
      "[params]\ndeltas = 0.2, 0.1, 0.05, 0.025\nepsilon_rule = delta\n"
      "reynolds = 0.1\nweber = 0.1\nalpha = 0.3\n"
      "[resolution]\nnx = 64\nny = 24\n"
      "[run]\nt_end = 1\nsamples = 20\n"
      "[initial]\nmodes = 1:0.01, 2:0.005\n";
  const ComparisonResult kk = compare_models(parse_config(base + "[compare]\nmodel_a = kawahara\nmodel_b = kdvb\n"));
  const ComparisonResult bk = compare_models(parse_config(base + "[compare]\nmodel_a = burgers\nmodel_b = kawahara\n"));
  ExperimentConfig ns = parse_config(base + "[compare]\nmodel_a = ns\nmodel_b = burgers\n");
  ns.deltas = {0.2, 0.1, 0.05};
  ns.nx = 32;
  const ComparisonResult nb = compare_ns_model(ns, true);
  const bool a = kk.fit.valid && kk.fit.slope >= 1.5 && kk.fit.slope <= 2.5;
  const bool b = bk.fit.valid && bk.fit.slope >= 1.5;
  const bool c = nb.monotone;
  std::string errs;
  for (const ComparisonRow& row : nb.rows) errs += " " + num(row.err_l2, 3);
  return {a && b && c, "Kawahara-KdVB slope " + num(kk.fit.slope, 4) + (a ? " ok" : " out of [1.5, 2.5]") +
                           "; Burgers-Kawahara slope " + num(bk.fit.slope, 4) + (b ? " ok" : " below 1.5") +
                           "; NS-Burgers errors" + errs + (c ? " monotone" : " not monotone") +
                           " (dt/2 change " + num(100 * nb.dt_refine_change, 3) + "%)"};
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, std::string, std::function<Outcome()>>> criteria{
      {1, "coefficient golden numbers", coefficients},
      {2, "critical Reynolds bracketing", critical_bracket},
      {3, "linear exactness of models", linear_exactness},
      {4, "mass conservation", mass},
      {5, "extension operator audit", extension},
      {6, "Korn audit", korn},
      {7, "trace audit", trace},
      {8, "pressure solver", pressure},
      {9, "NS fixed point and linear growth", ns_linear},
      {10, "energy decay scaling", energy_decay},
      {11, "uniform-in-delta boundedness", uniformity},
      {12, "truncation-order scaling", truncation},
  };
  int failed = 0;
  for (const auto& [id, name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

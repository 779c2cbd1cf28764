#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "filmcascade/fieldops.hpp"
#include "filmcascade/transform.hpp"

using namespace filmcascade;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SurfaceField random_surface(const Grid& g, double amp, std::uint64_t seed, int band = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  SurfaceField s(g.nx());
  for (int n = 1; n <= band; ++n) s.coef[n] = amp * cplx(N(rng), N(rng)) / double(n * n);
  return s;
}

double mat_dev(const MatField& a, const MatField& b) {
  return std::max({max_abs(a.xx - b.xx), max_abs(a.xy - b.xy), max_abs(a.yx - b.yx),
                   max_abs(a.yy - b.yy)});
}

}  // namespace

TEST_CASE("extension multiplier") {
  const auto top = extension_multiplier_jet(3, 0.7, 1.0);
  CHECK(top[0] == 1.0);
  const auto mid = extension_multiplier_jet(1, 1.0, 0.5);
  CHECK(mid[0] == doctest::Approx(256.0 / 257.0).epsilon(1e-15));
  // The multiplier is even about y = 1/2.
  CHECK(std::abs(mid[1]) < 1e-15);
  CHECK(std::abs(mid[3]) < 1e-15);
  for (double y : {0.0, 1.0})
    for (int j = 1; j <= 3; ++j) CHECK(std::abs(extension_multiplier_jet(5, 0.3, y)[j]) < 1e-14);
}

TEST_CASE("extended surface restricts to eta at the top and is flat at the walls") {
  const Grid g(32, 32);
  const SurfaceField eta = random_surface(g, 0.1, 3);
  const ExtendedSurface ext = extend_surface(g, eta, 0.5);
  const std::vector<double> ev = g.ifft(eta);
  const BulkField e0 = ext.field(g, 0, 0);
  const int top = g.ny() - 1;
  for (int i = 0; i < g.nx(); ++i) CHECK(std::abs(e0(i, top) - ev[i]) < 1e-15);
  for (int j = 1; j <= 3; ++j) {
    const BulkField d = ext.field(g, 0, j);
    for (int i = 0; i < g.nx(); ++i) {
      CHECK(std::abs(d(i, 0)) < 1e-10);
      CHECK(std::abs(d(i, top)) < 1e-10);
    }
  }
  // The stored y-jet agrees with collocation differentiation of eta~.
  const BulkField dy = differentiate(g, e0, Axis::Y, 1);
  CHECK(max_abs(dy - ext.field(g, 0, 1)) < 1e-8);
}

TEST_CASE("extension audit ratios") {
  ExtensionAuditOptions o;
  o.deltas = {1.0, 0.25, 1.0 / 16};
  o.trials = 5;
  o.nx = 32;
  o.ny = 48;
  const std::vector<ExtensionAuditRow> rows = extension_audit(o);
  REQUIRE(!rows.empty());
  for (const ExtensionAuditRow& r : rows) {
    CHECK(std::isfinite(r.ratio_plain));
    if (r.i == 0 && r.j == 0) CHECK(r.ratio_plain <= 1.0 + 1e-12);
  }
}

TEST_CASE("zero surface and zero epsilon give the identity geometry") {
  const Grid g(16, 16);
  const MatField I = identity_field(g);
  const MatField Z{g.zeros(), g.zeros(), g.zeros(), g.zeros()};
  for (int variant = 0; variant < 2; ++variant) {
    ScalingParams p = make_params(0.1, variant == 0 ? 0.3 : 0.0, 0.2, 0.1, 0.4);
    const SurfaceField eta = variant == 0 ? SurfaceField(g.nx()) : random_surface(g, 0.2, 5);
    const TransformAssembly tr = build_transform(g, eta, p);
    CHECK(max_abs(tr.J - y_profile(g, [](double) { return 1.0; })) == 0.0);
    CHECK(max_abs(tr.a1) == 0.0);
    CHECK(max_abs(tr.b1) == 0.0);
    CHECK(max_abs(tr.b2) == 0.0);
    for (const MatField* m : {&tr.A1, &tr.A2, &tr.A6}) CHECK(mat_dev(*m, I) == 0.0);
    for (const MatField* m : {&tr.A3, &tr.A4, &tr.A5, &tr.N, &tr.N1, &tr.N2, &tr.N6})
      CHECK(mat_dev(*m, Z) == 0.0);
  }
}

TEST_CASE("A5 is symmetric and I - A5 stays positive definite on small data") {
  const Grid g(32, 24);
  const ScalingParams p = make_params(0.2, 0.5, 0.2, 0.1, 0.4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TransformAssembly tr = build_transform(g, random_surface(g, 0.05, seed), p);
    CHECK(tr.a5_asymmetry < 1e-13);
    CHECK(mat_dev(tr.A5, tr.A5.transpose()) < 1e-13);
    const MatField IA = identity_field(g) - tr.A5;
    for (std::size_t k = 0; k < IA.xx.data.size(); ++k) {
      const double a = IA.xx.data[k], b = IA.xy.data[k], d = IA.yy.data[k];
      const double tr2 = 0.5 * (a + d), det = a * d - b * b;
      const double disc = std::sqrt(std::max(0.0, tr2 * tr2 - det));
      CHECK(tr2 - disc > 0.0);
      CHECK(tr2 + disc < 2.0);
    }
  }
}

TEST_CASE("degenerate geometry is rejected") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 1.0, 0.2, 0.1, 0.4);
  SurfaceField eta(g.nx());
  eta.coef[0] = -1.0;  // film thickness zero everywhere
  CHECK_THROWS_AS(build_transform(g, eta, p), GeometryError);
}

TEST_CASE("boundary terms vanish on the zero state and at zero epsilon") {
  const Grid g(16, 16);
  for (double eps : {0.3, 0.0}) {
    const ScalingParams p = make_params(0.1, eps, 0.2, 0.1, 0.4);
    NSState s = zero_state(g, p);
    if (eps == 0.0) {
      s.eta = random_surface(g, 0.1, 2);
      s.u = g.from_function([](double x, double y) { return 0.01 * std::sin(kTwoPi * x) * y * y; });
    }
    const TransformAssembly tr = build_transform(g, s.eta, p);
    const BoundaryTerms bt = assemble_boundary_terms(g, s, tr);
    for (const auto* v : {&bt.h1, &bt.h2, &bt.h21, &bt.h22, &bt.h3, &bt.h4, &bt.h5, &bt.b3, &bt.b4,
                          &bt.h_dot_t, &bt.h_dot_n})
      CHECK(max_abs(*v) == 0.0);
    const BulkTerms bk = assemble_bulk_terms(g, s, nullptr);
    CHECK(max_abs(bk.f.x) == 0.0);
    CHECK(max_abs(bk.f.y) == 0.0);
  }
}

TEST_CASE("h3 for a single cosine") {
  const Grid g(32, 16);
  const double a = 0.3, eps = 0.4;
  const ScalingParams p = make_params(0.1, eps, 0.2, 0.1, 0.4);
  NSState s = zero_state(g, p);
  s.eta.coef[1] = 0.5 * a;
  const TransformAssembly tr = build_transform(g, s.eta, p);
  const BoundaryTerms bt = assemble_boundary_terms(g, s, tr);
  for (int i = 0; i < g.nx(); ++i) {
    const double x = g.x()[i], c = std::cos(kTwoPi * x);
    const double expect = eps * eps * a * a * a * c * c * (-kTwoPi * std::sin(kTwoPi * x));
    CHECK(std::abs(bt.h3[i] - expect) < 1e-12);
  }
}

TEST_CASE("tangential boundary identity holds") {
  const Grid g(32, 24);
  const ScalingParams p = make_params(0.2, 0.5, 0.3, 0.1, 0.4);
  NSState s = zero_state(g, p);
  s.eta = random_surface(g, 0.05, 9);
  s.u = g.from_function([](double x, double y) { return 0.02 * std::cos(kTwoPi * x) * y * (2.0 - y); });
  s.v = g.from_function([](double x, double y) { return 0.01 * std::sin(kTwoPi * x) * y * y; });
  const TransformAssembly tr = build_transform(g, s.eta, p);
  const BoundaryTerms bt = assemble_boundary_terms(g, s, tr);
  const BulkField uy = differentiate(g, s.u, Axis::Y, 1);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    const double rhs = bt.b4[i] * uy(i, g.ny() - 1) + bt.h5[i];
    worst = std::max(worst, std::abs(bt.h_dot_t[i] - rhs));
    scale = std::max(scale, std::abs(bt.h_dot_t[i]));
  }
  CHECK(worst <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("nonlinear terms scale linearly in epsilon on small data") {
  const Grid g(32, 24);
  auto norm_at = [&](double eps) {
    const ScalingParams p = make_params(0.2, eps, 0.3, 0.1, 0.4);
    NSState s = zero_state(g, p);
    s.eta = random_surface(g, 1e-3, 4);
    s.u = g.from_function([](double x, double y) { return 1e-3 * std::cos(kTwoPi * x) * y * (2.0 - y); });
    const TransformAssembly tr = build_transform(g, s.eta, p);
    return max_abs(assemble_forcing(g, s, tr).x) + max_abs(assemble_forcing(g, s, tr).y);
  };
  const double full = norm_at(0.2), half = norm_at(0.1);
  REQUIRE(full > 0.0);
  CHECK(std::abs(half / full - 0.5) < 0.05);
}

TEST_CASE("time-dependent bulk terms require rates") {
  const Grid g(16, 16);
  const ScalingParams p = make_params(0.1, 0.3, 0.2, 0.1, 0.4);
  NSState s = zero_state(g, p);
  s.eta.coef[1] = 0.01;
  BulkTermOptions o;
  o.time_terms = true;
  CHECK_THROWS_AS(assemble_bulk_terms(g, s, nullptr, o), ContractError);
}

TEST_CASE("nusselt profile") {
  const Grid g(8, 16);
  const BulkField ub = nusselt_field(g), us = nusselt_slope_field(g);
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y()[j];
    CHECK(std::abs(ub(0, j) - y * (2.0 - y)) < 1e-15);
    CHECK(std::abs(us(3, j) - 2.0 * (1.0 - y)) < 1e-15);
  }
}

TEST_CASE("change of variables preserves a divergence-free field") {
  const Grid g(48, 32);
  const double eps = 0.3;
  const ScalingParams p = make_params(0.5, eps, 0.2, 0.1, 0.4);
  SurfaceField eta(g.nx());
  eta.coef[1] = {0.05, 0.02};
  eta.coef[2] = {-0.01, 0.03};
  const TransformAssembly tr = build_transform(g, eta, p);
  const BulkField E = tr.ext.field(g, 0, 0), Ex = tr.ext.field(g, 1, 0);
  // Physical stream function psi = sin(2 pi x) y'^3 on 0 < y' < 1 + eps eta.
  BulkField up = g.zeros(), vp = g.zeros();
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const double x = g.x()[i], y = g.y()[j];
      const double ys = y * (1.0 + eps * E(i, j));
      const double U = 3.0 * std::sin(kTwoPi * x) * ys * ys;
      const double V = -kTwoPi * std::cos(kTwoPi * x) * ys * ys * ys;
      up(i, j) = tr.J(i, j) * U;
      vp(i, j) = V - y * eps * Ex(i, j) * U;
    }
  const BulkField div = differentiate(g, up, Axis::X, 1) + differentiate(g, vp, Axis::Y, 1);
  CHECK(max_abs(div) < 1e-10 * max_abs(differentiate(g, up, Axis::X, 1)));
}

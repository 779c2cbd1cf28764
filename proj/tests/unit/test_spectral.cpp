#include <cmath>
#include <numbers>

#include "doctest.h"
#include "filmcascade/spectral.hpp"

using namespace filmcascade;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("identity multiplier leaves a field unchanged") {
  SurfaceField f(16);
  f.coef[2] = {0.3, -0.1};
  f.coef[5] = 1.2;
  const SurfaceField g = apply_multiplier(Multiplier::identity(), f);
  for (int n = 0; n < f.nmodes(); ++n) CHECK(std::abs(g.coef[n] - f.coef[n]) == 0.0);
}

TEST_CASE("absolute derivative of a single exponential mode") {
  SurfaceField f(16);
  f.coef[1] = 1.0;
  const SurfaceField g = apply_multiplier(Multiplier::abs_power(1.0), f);
  CHECK(std::abs(g.coef[1] - cplx(kTwoPi)) < 1e-14);
}

TEST_CASE("delta-weighted multiplier at n = 1") {
  const cplx v = Multiplier::delta_weight(2.0, 0.5).symbol(1);
  CHECK(v.real() == doctest::Approx((1.0 + std::numbers::pi) * (1.0 + std::numbers::pi)).epsilon(1e-14));
  CHECK(v.real() == doctest::Approx(17.152).epsilon(1e-4));
}

TEST_CASE("spectral x-derivatives are exact on band-limited data") {
  const Grid g(32, 16);
  std::vector<double> s(32), c(32);
  for (int i = 0; i < 32; ++i) {
    s[i] = std::sin(kTwoPi * g.x()[i]);
    c[i] = kTwoPi * std::cos(kTwoPi * g.x()[i]);
  }
  CHECK(max_diff(differentiate(g, s, 1), c) < 1e-12);

  SurfaceField e(32);
  e.coef[1] = 1.0;
  const SurfaceField d4 = differentiate(e, 4);
  CHECK(std::abs(d4.coef[1] - cplx(std::pow(kTwoPi, 4))) < 1e-9);
  CHECK_THROWS_AS(differentiate(e, 5), SpectralError);
}

TEST_CASE("collocation y-derivative of the nusselt profile") {
  const Grid g(8, 16);
  const BulkField f = g.from_function([](double, double y) { return 2.0 * y - y * y; });
  const BulkField d = differentiate(g, f, Axis::Y, 1);
  double err = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 16; ++j) err = std::max(err, std::abs(d(i, j) - (2.0 - 2.0 * g.y()[j])));
  CHECK(err < 1e-10);
}

TEST_CASE("two-thirds dealiasing") {
  SurfaceField lo(32), hi(32);
  for (int n = 1; n <= 10; ++n) lo.coef[n] = cplx(1.0 / n, 0.5 / n);
  const SurfaceField kept = dealias(lo);
  for (int n = 0; n < lo.nmodes(); ++n) CHECK(std::abs(kept.coef[n] - lo.coef[n]) == 0.0);
  hi.coef[15] = 1.0;
  const SurfaceField gone = dealias(hi);
  for (const cplx& c : gone.coef) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("surface sobolev norms") {
  SurfaceField zero(32);
  CHECK(surface_norm(zero, 0.0) == 0.0);
  SurfaceField c(32);
  c.coef[1] = 0.5;  // cos(2 pi x)
  CHECK(surface_norm(c, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(surface_norm(c, 1.0) == doctest::Approx(std::sqrt((1.0 + kTwoPi * kTwoPi) / 2.0)).epsilon(1e-14));
  CHECK(surface_norm(c, 1.0) == doctest::Approx(4.4988).epsilon(1e-4));
}

TEST_CASE("bulk norms by quadrature") {
  const Grid g(16, 24);
  CHECK(bulk_norm(g, g.zeros(), 0) == 0.0);
  const BulkField one = g.from_function([](double, double) { return 1.0; });
  CHECK(bulk_norm(g, one, 0) == doctest::Approx(1.0).epsilon(1e-14));
  const BulkField f = g.from_function([](double x, double y) { return std::sin(kTwoPi * x) * y; });
  CHECK(bulk_norm(g, f, 0) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-13));
}

TEST_CASE("antiderivative from the surface") {
  const Grid g(8, 16);
  const BulkField one = g.from_function([](double, double) { return 1.0; });
  const BulkField twoy = g.from_function([](double, double y) { return 2.0 * y; });
  const BulkField a = antiderivative_y(g, one), b = antiderivative_y(g, twoy);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 16; ++j) {
      const double y = g.y()[j];
      e1 = std::max(e1, std::abs(a(i, j) - (y - 1.0)));
      e2 = std::max(e2, std::abs(b(i, j) - (y * y - 1.0)));
    }
  CHECK(e1 < 1e-13);
  CHECK(e2 < 1e-13);
}

TEST_CASE("fft round trip") {
  const Grid g(32, 8);
  const BulkField f = g.from_function([](double x, double y) { return std::cos(kTwoPi * 3 * x) * y + y * y; });
  const BulkField r = g.ifft(g.fft(f));
  CHECK(max_diff(r.data, f.data) < 1e-14);
}

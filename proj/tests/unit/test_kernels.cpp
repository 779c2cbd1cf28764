#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "filmcascade/kernels.hpp"
#include "filmcascade/spectral.hpp"

using namespace filmcascade;
namespace k = filmcascade::kernels;

namespace {

std::vector<double> randoms(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = N(rng);
  return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / (1.0 + std::abs(a[i])));
  return m;
}

}  // namespace

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2 not available on this host; equivalence not exercised");
    return;
  }
  // Odd lengths cover the vector tails.
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    const auto a = randoms(n, 1), b = randoms(n, 2), c = randoms(n, 3);
    std::vector<double> s(n), v(n);
    k::scalar::mul(a.data(), b.data(), s.data(), n);
    k::avx2::mul(a.data(), b.data(), v.data(), n);
    CHECK(max_rel(s, v) == 0.0);
    k::scalar::fmadd(a.data(), b.data(), c.data(), s.data(), n);
    k::avx2::fmadd(a.data(), b.data(), c.data(), v.data(), n);
    CHECK(max_rel(s, v) < 1e-15);
    s = c;
    v = c;
    k::scalar::axpy(0.7, a.data(), s.data(), n);
    k::avx2::axpy(0.7, a.data(), v.data(), n);
    CHECK(max_rel(s, v) < 1e-15);

    std::vector<std::complex<double>> p(n), f(n), so(n), vo(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = {a[i], b[i]}, f[i] = {c[i], a[i]};
    k::scalar::cmul(p.data(), f.data(), so.data(), n);
    k::avx2::cmul(p.data(), f.data(), vo.data(), n);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(so[i] - vo[i]) / (1.0 + std::abs(so[i])));
    CHECK(e < 1e-15);
  }
  for (std::size_t ny : {5u, 16u, 33u}) {
    const std::size_t rows = 7;
    const auto d = randoms(ny * ny, 4), f = randoms(rows * ny, 5);
    std::vector<double> s(rows * ny), v(rows * ny);
    k::scalar::rows_matmul(d.data(), ny, f.data(), rows, s.data());
    k::avx2::rows_matmul(d.data(), ny, f.data(), rows, v.data());
    CHECK(max_rel(s, v) < 1e-13);
  }
}

TEST_CASE("backend switch changes no derivative beyond rounding") {
  const Grid g(32, 24);
  const BulkField f = g.from_function([](double x, double y) { return std::sin(6.283185307179586 * x) * y * y * y; });
  const k::Backend before = k::active_backend();
  k::set_backend(k::Backend::Scalar);
  const BulkField a = differentiate(g, f, Axis::Y, 2);
  if (k::avx2_available()) {
    k::set_backend(k::Backend::Avx2);
    const BulkField b = differentiate(g, f, Axis::Y, 2);
    // Chebyshev second derivatives amplify rounding by about ny^4.
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      scale = std::max(scale, std::abs(f.data[i]) * std::pow(24.0, 4));
      diff = std::max(diff, std::abs(a.data[i] - b.data[i]));
    }
    CHECK(diff <= 1e-15 * scale);
  }
  k::set_backend(before);
  CHECK(std::string(k::backend_name(k::Backend::Scalar)) != std::string(k::backend_name(k::Backend::Avx2)));
}

#include <cmath>
#include <numbers>
#include <random>

#include "filmcascade/transform.hpp"

namespace filmcascade {

namespace {

constexpr int kJet = 5;  // orders 0..4
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Series = std::array<double, kJet>;

Series series_mul(const Series& a, const Series& b) {
  Series c{};
  for (int i = 0; i < kJet; ++i)
    for (int j = 0; i + j < kJet; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline double parseval_weight(int n, int nx) { return (n == 0 || 2 * n == nx) ? 1.0 : 2.0; }

}  // namespace

std::array<double, 5> extension_multiplier_jet(int n, double delta, double y) {
  // q(y + h) = delta n (y + h)(1 - y - h), exactly quadratic in h.
  const double c = delta * n;
  const Series q{c * y * (1.0 - y), c * (1.0 - 2.0 * y), -c, 0.0, 0.0};
  const Series q2 = series_mul(q, q);
  Series d = series_mul(q2, q2);
  d[0] += 1.0;
  Series m{};
  m[0] = 1.0 / d[0];
  for (int k = 1; k < kJet; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += d[i] * m[k - i];
    m[k] = -acc / d[0];
  }
  // Taylor coefficients to derivatives.
  double fact = 1.0;
  for (int k = 1; k < kJet; ++k) {
    fact *= k;
    m[k] *= fact;
  }
  return m;
}

BulkField ExtendedSurface::field(const Grid& g, int i, int j) const {
  if (j < 0 || j > 4) throw SpectralError("ExtendedSurface::field: j must be in 0..4");
  if (i == 0) return g.ifft(jet[j]);
  return g.ifft(apply_multiplier(Multiplier::derivative(i), jet[j]));
}

ExtendedSurface extend_surface(const Grid& g, const SurfaceField& eta, double delta) {
  if (eta.nx != g.nx()) throw SpectralError("extend_surface: grid size mismatch");
  ExtendedSurface e;
  e.delta = delta;
  for (auto& s : e.jet) s = BulkSpectrum(g.nx(), g.ny());
  for (int n = 0; n < g.nmodes(); ++n) {
    for (int j = 0; j < g.ny(); ++j) {
      const auto m = extension_multiplier_jet(n, delta, g.y()[j]);
      for (int k = 0; k < kJet; ++k) e.jet[k](n, j) = m[k] * eta.coef[n];
    }
  }
  return e;
}

std::vector<ExtensionAuditRow> extension_audit(const ExtensionAuditOptions& opts) {
  if (opts.band < 1 || 2 * opts.band > opts.nx)
    throw ParameterError("extension_audit: band must satisfy 1 <= band <= nx/2");
  const Grid g(opts.nx, opts.ny);
  const auto& w = g.weights();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Random amplitudes shared by every delta so the sweep compares like with like.
  std::vector<std::vector<double>> amp2(opts.trials, std::vector<double>(opts.band + 1, 0.0));
  for (auto& a : amp2)
    for (int n = 1; n <= opts.band; ++n) {
      const double re = gauss(rng), im = gauss(rng);
      a[n] = re * re + im * im;
    }

  std::vector<ExtensionAuditRow> rows;
  for (double delta : opts.deltas) {
    // prof[j][n] = int_0^1 |d_y^j m_n(y)|^2 dy
    std::vector<std::vector<double>> prof(kJet, std::vector<double>(opts.band + 1, 0.0));
    for (int n = 1; n <= opts.band; ++n)
      for (int jy = 0; jy < g.ny(); ++jy) {
        const auto m = extension_multiplier_jet(n, delta, g.y()[jy]);
        for (int k = 0; k < kJet; ++k) prof[k][n] += w[jy] * m[k] * m[k];
      }
    for (int j = 0; j <= std::min(4, opts.max_order); ++j)
      for (int i = 0; i + j <= opts.max_order; ++i) {
        ExtensionAuditRow row;
        row.delta = delta;
        row.i = i;
        row.j = j;
        for (const auto& a : amp2) {
          double num = 0.0, den_plain = 0.0, den_half = 0.0;
          for (int n = 1; n <= opts.band; ++n) {
            const double k = kTwoPi * n;
            const double wn = parseval_weight(n, opts.nx) * a[n];
            num += wn * std::pow(k, 2 * i) * prof[j][n];
            den_plain += wn * std::pow(k, 2 * (i + j));
            den_half += wn * std::pow(k, 2.0 * (i + j) - 1.0);
          }
          num = std::sqrt(num);
          row.ratio_plain =
              std::max(row.ratio_plain, num / (std::pow(delta, j) * std::sqrt(den_plain)));
          if (i + j >= 1)
            row.ratio_half = std::max(
                row.ratio_half, num / (std::pow(delta, j - 0.5) * std::sqrt(den_half)));
        }
        rows.push_back(row);
      }
  }
  return rows;
}

}  // namespace filmcascade

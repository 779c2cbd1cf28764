#pragma once

// First-order forward-mode dual numbers: a + b e with e^2 = 0.
// Used to linearise fluxes about a base state without hand-copied
// coefficients.

namespace filmcascade {

struct Dual {
  double v = 0.0;  ///< value
  double d = 0.0;  ///< derivative

  constexpr Dual() = default;
  constexpr Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}
};

constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
constexpr Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }

constexpr Dual ipow(Dual a, int k) {
  Dual r(1.0);
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace filmcascade

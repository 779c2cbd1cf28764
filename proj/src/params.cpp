#include "filmcascade/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace filmcascade {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "parameter '" << name << "' must be positive and finite, got " << v;
    throw ParameterError(os.str());
  }
}

}  // namespace

void PhysicalParams::validate() const {
  require_positive(rho, "rho");
  require_positive(g, "g");
  require_positive(alpha, "alpha");
  require_positive(mu, "mu");
  require_positive(sigma, "sigma");
  require_positive(h0, "h0");
  require_positive(l0, "l0");
  require_positive(a0, "a0");
  if (alpha > std::numbers::pi / 2 + 1e-15)
    throw ParameterError("alpha must lie in (0, pi/2]");
}

void ScalingParams::validate() const {
  require_positive(delta, "delta");
  if (delta > 1.0) throw ParameterError("delta must satisfy 0 < delta <= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ParameterError("epsilon must satisfy 0 <= epsilon <= 1");
  if (!(reynolds >= 0.0) || !std::isfinite(reynolds))
    throw ParameterError("reynolds must be nonnegative");
  if (!(weber >= 0.0) || !std::isfinite(weber))
    throw ParameterError("weber must be nonnegative");
  require_positive(alpha, "alpha");
  if (alpha > std::numbers::pi / 2 + 1e-15)
    throw ParameterError("alpha must lie in (0, pi/2]");
}

void ScalingParams::validate_ns() const {
  validate();
  if (!(alpha < std::numbers::pi / 2))
    throw ParameterError("Navier-Stokes solver requires alpha < pi/2");
  require_positive(reynolds, "reynolds");
}

double ScalingParams::inv_tan_alpha() const {
  // cos(pi/2) is 6e-17 in floating point; snap the vertical wall to 0.
  if (std::abs(alpha - std::numbers::pi / 2) < 1e-14) return 0.0;
  return 1.0 / std::tan(alpha);
}

bool ScalingParams::weber_in_window(double w1, double w2) const {
  return weber >= w1 && weber <= w2 / (delta * delta);
}

ScalingParams make_params(double delta, double epsilon, double reynolds,
                          double weber, double alpha) {
  ScalingParams p;
  p.delta = delta;
  p.epsilon = epsilon;
  p.reynolds = reynolds;
  p.weber = weber;
  p.alpha = alpha;
  p.validate();
  return p;
}

ScalingParams nondimensionalize(const PhysicalParams& phys) {
  phys.validate();
  ScalingParams s;
  s.delta = phys.h0 / phys.l0;
  s.epsilon = phys.a0 / phys.h0;
  s.alpha = phys.alpha;
  s.U0 = phys.rho * phys.g * phys.h0 * phys.h0 * std::sin(phys.alpha) /
         (2.0 * phys.mu);
  s.V0 = s.delta * s.U0;
  s.t0 = phys.l0 / s.U0;
  s.P0 = phys.rho * phys.g * phys.h0 * std::sin(phys.alpha);
  s.reynolds = phys.rho * s.U0 * phys.h0 / phys.mu;
  s.weber = phys.sigma / (phys.rho * phys.g * phys.h0 * phys.h0);
  s.has_scales = true;
  if (s.delta > 1.0) throw ParameterError("h0/l0 exceeds 1");
  if (s.epsilon > 1.0) throw ParameterError("a0/h0 exceeds 1");
  return s;
}

NusseltValue nusselt(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("nusselt: y outside [0,1]");
  return {2.0 * y - y * y, 2.0 - 2.0 * y};
}

double nusselt_dimensional(const PhysicalParams& phys, double z) {
  if (!(z >= 0.0 && z <= phys.h0))
    throw DomainError("nusselt_dimensional: z outside [0,h0]");
  return phys.rho * phys.g * std::sin(phys.alpha) * (2.0 * phys.h0 * z - z * z) /
         (2.0 * phys.mu);
}

}  // namespace filmcascade

#pragma once

#include <stdexcept>
#include <string>

namespace filmcascade {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimensional inputs (SI). Only the config layer sees these.
struct PhysicalParams {
  double rho = 0.0;    ///< density [kg/m^3]
  double g = 0.0;      ///< gravity [m/s^2]
  double alpha = 0.0;  ///< inclination [rad], 0 < alpha <= pi/2
  double mu = 0.0;     ///< shear viscosity [Pa s]
  double sigma = 0.0;  ///< surface tension [N/m]
  double h0 = 0.0;     ///< mean film thickness [m]
  double l0 = 0.0;     ///< streamwise scale [m]
  double a0 = 0.0;     ///< amplitude scale [m]

  void validate() const;
};

/// Nondimensional bundle carried by every downstream module.
///
/// The reference scales are populated only when the bundle came from
/// nondimensionalize(); a bundle built directly from (delta, ..., alpha)
/// leaves them at zero and has_scales == false.
struct ScalingParams {
  double delta = 0.1;
  double epsilon = 0.1;
  double reynolds = 0.1;
  double weber = 0.1;
  double alpha = 0.3;

  double U0 = 0.0;
  double V0 = 0.0;
  double t0 = 0.0;
  double P0 = 0.0;
  bool has_scales = false;

  /// Accepts the closed ranges 0 <= epsilon <= 1, R >= 0, W >= 0 so that
  /// linearised (epsilon = 0) and creeping (R = 0) limits stay expressible.
  void validate() const;
  /// Stricter check for the Navier-Stokes solver: 0 < alpha < pi/2, R > 0.
  void validate_ns() const;

  double inv_tan_alpha() const;  ///< 0 at alpha = pi/2
  double surface_tension() const { return delta * delta * weber; }
  /// Flags W outside [w1, delta^-2 w2]; the window constants are user data.
  bool weber_in_window(double w1 = 1e-3, double w2 = 1e3) const;
};

ScalingParams make_params(double delta, double epsilon, double reynolds,
                          double weber, double alpha);

ScalingParams nondimensionalize(const PhysicalParams& phys);

struct NusseltValue {
  double u;   ///< 2y - y^2
  double uy;  ///< 2 - 2y
};

NusseltValue nusselt(double y);

/// Dimensional Nusselt profile u(z) = rho g sin(alpha) (2 h0 z - z^2)/(2 mu).
double nusselt_dimensional(const PhysicalParams& phys, double z);

}  // namespace filmcascade

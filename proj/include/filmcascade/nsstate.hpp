#pragma once

#include "filmcascade/params.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

/// Perturbation state on the flattened strip: u is the streamwise
/// velocity, v the vertical one (the momentum unknown is (u, delta v)).
struct NSState {
  SurfaceField eta;
  BulkField u, v, p;
  double t = 0.0;
  ScalingParams params;
};

/// Time derivatives evaluated from the equations at one instant.
struct NSRates {
  SurfaceField eta_t;
  BulkField u_t, v_t, p_t;
  bool has_p_t = false;
};

NSState zero_state(const Grid& g, const ScalingParams& p);

/// s + h * r, component-wise; p moves along p_t only when it is present.
NSState advance_along(const NSState& s, const NSRates& r, double h);

}  // namespace filmcascade

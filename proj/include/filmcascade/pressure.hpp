#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "filmcascade/fieldops.hpp"
#include "filmcascade/nsstate.hpp"
#include "filmcascade/spectral.hpp"
#include "filmcascade/transform.hpp"

namespace filmcascade {

class PressureSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mode-wise solver for  Delta_delta q = r  in the strip,
///   q = top on y = 1,  q_y = 0 on y = 0,
/// with Delta_delta = delta^2 d_x^2 + d_y^2. One LU per Fourier mode,
/// factorised at construction.
class DeltaPoisson {
 public:
  DeltaPoisson(const Grid& g, double delta);
  ~DeltaPoisson();
  DeltaPoisson(DeltaPoisson&&) noexcept;
  DeltaPoisson& operator=(DeltaPoisson&&) noexcept;

  BulkField solve(const BulkField& rhs, const std::vector<double>& top) const;

 private:
  const Grid* g_;
  double delta_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Data of the pressure problem
///   div_d(A6 grad_d p) = g,  p = phi on the surface,  (p + g0)_y = 0 at the wall.
struct PressureData {
  double delta = 0.1;
  BulkField g, g0;
  std::vector<double> phi;
  MatField n6;             ///< A6 - I
};

PressureData pressure_data(const Grid& grid, const NSState& s, const TransformAssembly& tr,
                           const BoundaryTerms& bt);

struct PressureOptions {
  double tol = 1e-10;   ///< max-norm of the update, relative to max(1, |p|)
  int max_iter = 200;
};

struct PressureInfo {
  int iterations = 0;
  double last_update = 0.0;
};

/// Fixed point on q = p + g0:
///   Delta_delta q = g + div_d(grad_d g0 - N6 grad_d p),  q = phi + g0 on top,
///   q_y = 0 at the wall.
/// A growing update or max_iter without convergence raises PressureSolverError.
BulkField solve_pressure(const Grid& grid, const PressureData& data,
                         const PressureOptions& opts = {}, PressureInfo* info = nullptr);

/// Pressure of a state from its own surface data (no time stepping).
BulkField pressure_of_state(const Grid& grid, const NSState& s,
                            const PressureOptions& opts = {});

}  // namespace filmcascade

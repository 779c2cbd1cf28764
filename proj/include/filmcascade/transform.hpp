#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "filmcascade/fieldops.hpp"
#include "filmcascade/nsstate.hpp"
#include "filmcascade/params.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---- Extension -------------------------------------------------------------

/// Multiplier 1/(1 + (delta n (1-y) y)^4) and its y-derivatives up to 4th
/// order; n is the integer mode index, not 2 pi n.
std::array<double, 5> extension_multiplier_jet(int n, double delta, double y);

/// eta~ on the strip. jet[j] holds the x-spectrum of d_y^j eta~ (j <= 4),
/// evaluated from the exact y-derivatives of the multiplier.
struct ExtendedSurface {
  double delta = 0.0;
  std::array<BulkSpectrum, 5> jet;

  /// d_x^i d_y^j eta~ on the grid (i <= 4, j <= 4).
  BulkField field(const Grid& g, int i, int j) const;
};

ExtendedSurface extend_surface(const Grid& g, const SurfaceField& eta, double delta);

struct ExtensionAuditOptions {
  std::vector<double> deltas;
  int max_order = 4;   ///< i + j <= max_order, j <= 4
  int trials = 50;
  int nx = 32;
  int ny = 64;
  int band = 8;        ///< random modes 1..band
  std::uint64_t seed = 1;
};

struct ExtensionAuditRow {
  double delta = 0.0;
  int i = 0, j = 0;
  /// max over trials of ||dx^i dy^j eta~|| / (delta^j |dx^{i+j} eta|_0)
  double ratio_plain = 0.0;
  /// max of ||dx^i dy^j eta~|| / (delta^{j-1/2} ||D|^{i+j-1/2} eta|_0), i+j >= 1
  double ratio_half = 0.0;
};

std::vector<ExtensionAuditRow> extension_audit(const ExtensionAuditOptions& opts);

// ---- Geometry --------------------------------------------------------------

/// Coefficients of the flattened system. Matrices follow
///   A1 = [[1+b1, 0], [-a1, 1]],  A2 = [[1, a1], [0, 1+b1]],  A3 = diag(b2, 0),
///   A4 = A1^{-1} A2 - I,  A5 = A4 (I+A4)^{-1},  A6 = J A2^T A2 = I + A4,
/// with N1 = A1 - I, N2 = A2 - I, N = A1^{-1} - I, N6 = A6 - I.
struct TransformAssembly {
  ScalingParams params;
  ExtendedSurface ext;
  BulkField J, a1, b1, b2, V1;
  MatField A1, A2, A3, A4, A5, A6, N, N1, N2, N6;
  /// Largest |A5 - A5^T| entry, kept as an assembly self-check.
  double a5_asymmetry = 0.0;
};

/// J <= 1e-8 anywhere raises GeometryError.
TransformAssembly build_transform(const Grid& g, const SurfaceField& eta,
                                  const ScalingParams& p);

// ---- Boundary and bulk nonlinear terms ---------------------------------------

/// Surface terms as grid values on the torus.
struct BoundaryTerms {
  std::vector<double> h1, h2, h21, h22, h3, h4, h5, b3, b4;
  /// h/eps as (t-component, n-component); h.t/eps = b4 u_y + h5 is an identity.
  std::vector<double> h_dot_t, h_dot_n;
};

BoundaryTerms assemble_boundary_terms(const Grid& g, const NSState& s,
                                      const TransformAssembly& tr);

/// eta_t from the kinematic condition: v|top - eta_x + h3.
SurfaceField kinematic_rate(const Grid& g, const NSState& s);

/// Nonlinear bulk terms. f, f1..f3 are the momentum vectors of the
/// flattened system; sf1..sf3 the scalar pieces used by the energy
/// estimate:
///   sf1 = (f - (2/R) A4 grad p).e2,  sf3 = (f - (2/R) A4 grad p).e1,
///   sf2 = -(b2/(1+b2))(delta u_t + ubar delta u_x + ubar_y delta v
///          - delta^2 u_xx / R) - 2 b2 delta p_x/(R(1+b2)) - sf3/(1+b2).
struct BulkTerms {
  VecField f, f1, f2, f3, F1, F3;
  BulkField sf1, sf2, sf3;
  bool has_time_terms = false;
  VecField F2;
  std::map<int, VecField> G;  ///< commutator terms G_k, k = 1..kmax
};

struct BulkTermOptions {
  /// F2 and G_k need second-level time derivatives; they are formed by a
  /// centred difference along the supplied rates (directional derivative).
  bool time_terms = false;
  int kmax = 2;
  double jvp_step = 1e-6;
};

/// rates.u_t/v_t are required for sf2, F2 and G_k; rates.p_t for G_k.
BulkTerms assemble_bulk_terms(const Grid& g, const NSState& s, const NSRates* rates,
                              const BulkTermOptions& opts = {});

/// Only f (no rates needed): the explicit forcing of the momentum equation.
VecField assemble_forcing(const Grid& g, const NSState& s, const TransformAssembly& tr);

/// Nusselt profile on the grid.
BulkField nusselt_field(const Grid& g);
BulkField nusselt_slope_field(const Grid& g);

}  // namespace filmcascade

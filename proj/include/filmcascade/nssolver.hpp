#pragma once

#include <memory>
#include <string>
#include <vector>

#include "filmcascade/diagnostics.hpp"
#include "filmcascade/nsstate.hpp"
#include "filmcascade/params.hpp"
#include "filmcascade/pressure.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

/// IMEX1: backward Euler on the linear part, forward Euler on the rest.
/// CNAB2: Crank-Nicolson on the linear part (pressure and the algebraic
/// surface rows at the new level), Adams-Bashforth 2 on the rest.
/// SBDF2: BDF2 on the linear part, extrapolated explicit terms. Unlike
/// CNAB2 it damps the stiff viscous modes, which otherwise collect the
/// local truncation error and decay at rates near 4 / (|lambda| dt^2).
enum class NSScheme { IMEX1, CNAB2, SBDF2 };

struct NSOptions {
  double dt = 0.0;  ///< 0 selects default_dt()
  NSScheme scheme = NSScheme::SBDF2;
  /// Implicit share of the b2 u_yy stress; < 0 tracks 2 max|b2|.
  double sigma = -1.0;
  /// Picard sweeps enforcing the nonlinear surface rows at the new level.
  int surface_iterations = 20;
  double surface_tol = 1e-13;
  double divergence_tol = 1e-9;
  /// IMEX1 only: compare the coupled pressure with the elliptic one after
  /// each step. The multistep schemes always replace the coupled pressure by
  /// the elliptic one and report the difference.
  bool check_pressure = false;
  /// Multistep schemes: leading steps taken as two backward Euler half
  /// steps (Rannacher start-up), which also builds the history.
  int startup_steps = 2;
};

/// Half a grid cell per unit surface speed. The viscous terms are implicit,
/// so no diffusive restriction applies.
double default_dt(const Grid& g);

struct CompatibilityReport {
  double divergence = 0.0;  ///< max |u_x + v_y|
  double tangential = 0.0;  ///< max |u_y + delta^2 v_x - (2 + b3) eta - h1| on top
  double no_slip = 0.0;     ///< max |u|, |v| at the wall
  bool pass = false;        ///< all three below 1e-8
};

CompatibilityReport check_compatibility(const Grid& g, const NSState& s);

/// Velocity and pressure carried by a frozen surface: the steady momentum,
/// continuity and surface stress rows are solved with eta held fixed
/// (nonlinear terms by fixed-point iteration). The result satisfies the
/// three compatibility conditions.
NSState compatible_initial_state(const Grid& g, const SurfaceField& eta0,
                                 const ScalingParams& p, int max_iter = 50);

/// u_t, v_t from the momentum equations (zero at the wall), eta_t from the
/// kinematic condition, and optionally p_t as the directional derivative of
/// the elliptic pressure along these rates.
NSRates ns_rates(const Grid& g, const NSState& s, bool with_p_t = true,
                 double jvp_step = 1e-6);

struct StepInfo {
  double divergence = 0.0;
  double tangential = 0.0;    ///< tangential stress residual on top
  double normal = 0.0;        ///< normal stress residual on top
  int surface_iterations = 0;
  double pressure_gap = -1.0; ///< max |p_coupled - p_elliptic|; -1 when not formed
};

/// Surface-row residuals of a state (same measures as StepInfo).
StepInfo surface_residuals(const Grid& g, const NSState& s);

/// Advances one state with per-mode factorised descriptor solves. Keeps the
/// previous explicit terms for the Adams-Bashforth extrapolation, so one
/// stepper drives one trajectory.
class NSStepper {
 public:
  NSStepper(const Grid& g, const ScalingParams& p, NSOptions opts = {});
  ~NSStepper();
  NSStepper(NSStepper&&) noexcept;
  NSStepper& operator=(NSStepper&&) noexcept;

  /// Raises GeometryError if J <= 0, BlowUpError on non-finite values and
  /// DomainError if the divergence residual exceeds its tolerance.
  void step(NSState& s, StepInfo* info = nullptr);
  double dt() const;
  double sigma() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One first-order step from a fresh stepper.
NSState step_ns(const Grid& g, const NSState& s, double dt);

struct NSRunOptions {
  double t_end = 0.0;
  NSOptions step;
  int diag_every = 1;       ///< steps between diagnostic rows
  int snapshot_every = 0;   ///< steps between stored snapshots; 0 keeps first and last
  bool energy = true;       ///< fill the energy columns
  int energy_order = 2;
  EnergyWeights weights;
};

struct NSDiagRow {
  double t = 0.0;
  double E0 = 0.0, F0 = 0.0, E2 = 0.0, F2 = 0.0, N2 = 0.0;
  double divergence = 0.0, mass = 0.0, max_eta = 0.0;
};

struct NSTrajectory {
  std::vector<NSState> snapshots;
  std::vector<NSDiagRow> rows;
  std::vector<EnergyReport> reports;
  bool blew_up = false;
  std::string message;
};

/// Runs to t_end (t_end = 0 records only the initial snapshot). Blow-up ends
/// the run and is reported in the trajectory rather than thrown.
NSTrajectory run_ns(const Grid& g, const NSState& init, const NSRunOptions& opts);

/// Fixed-precision CSV of the diagnostic rows (bitwise reproducible).
std::string trajectory_csv(const NSTrajectory& tr);

}  // namespace filmcascade

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "filmcascade/params.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

enum class ModelKind { Burgers, KdVBurgers, Kawahara, Benney };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

struct ModelCoefficients {
  double B1 = 0.0;
  double D1 = 0.0;
  double G1 = 0.0;
};

/// B1 = (8/15)(5/(4 tan a) - R)
/// D1 = -2 - (22/63) R^2 + (40/63) R / tan a
/// G1 = -(2/3) W / sin a - (157/56) R - (8/45) R / tan^2 a
///      + (138904/155925) R^2 / tan a - (1213952/2027025) R^3
/// 1/tan a is taken as 0 at a = pi/2.
ModelCoefficients benney_coefficients(double alpha, double reynolds, double weber);

class FilmRuptureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

struct ModelState {
  SurfaceField eta;
  double t = 0.0;
  ScalingParams params;
  ModelKind kind = ModelKind::Burgers;
};

/// Linear Fourier symbol of the model at integer mode n (k = 2 pi n).
/// Benney's symbol comes from a dual-number linearisation of its flux.
cplx model_symbol(ModelKind kind, const ScalingParams& p, int n);
/// Same symbol at an arbitrary real wavenumber k (d_x -> ik).
cplx model_symbol_at(ModelKind kind, const ScalingParams& p, double k);

/// eta_t. Burgers family: -2 eta_x - 4 eps eta eta_x + delta B1 eta_xx
/// [+ delta^2 D1 eta_xxx [+ delta^3 G1 eta_xxxx]]. Benney (eps = 1):
/// d_x[-(2/3)h^3 + delta{(2/(3 tan a)) h^3 eta_x - (8R/15) h^6 eta_x
///     - (2 Wt/(3 sin a)) h^3 eta_xxx}], h = 1 + eta, Wt = delta^2 W.
/// Products are dealiased; Benney powers use 3/2 padding.
SurfaceField model_rhs(const ModelState& state);

struct StepperOptions {
  bool linear_only = false;  ///< drop the nonlinear part (linearised runs)
  int contour_points = 32;
};

/// ETDRK4 (Cox-Matthews, contour-integral coefficients): exact on the
/// linear constant-coefficient part, fourth order on the nonlinearity.
class ModelStepper {
 public:
  ModelStepper(ModelKind kind, const ScalingParams& params, int nx,
               StepperOptions opts = {});

  ModelKind kind() const { return kind_; }
  int nx() const { return nx_; }
  /// Nonlinear part N(eta) = rhs - L eta, in coefficient space.
  SurfaceField nonlinear(const SurfaceField& eta) const;
  /// One ETDRK4 step of size dt (coefficients cached per dt).
  ModelState step(const ModelState& s, double dt);
  /// Explicit-part step bound from the current amplitude.
  double stability_limit(const ModelState& s) const;

 private:
  struct Coeffs {
    double h = -1.0;
    std::vector<cplx> e, e2, q, f1, f2, f3;
  };
  void prepare(double dt);

  ModelKind kind_;
  ScalingParams params_;
  int nx_;
  StepperOptions opts_;
  std::vector<cplx> lin_;
  Coeffs c_;
  Fourier1D fft_;
  Fourier1D pad_fft_;
};

/// Single step; checks dt against the stability limit.
ModelState step_model(const ModelState& state, double dt, StepperOptions opts = {});

struct AdvanceOptions {
  double tol = 1e-9;      ///< local error target (step doubling)
  double dt_initial = 1e-3;
  double dt_max = 0.05;
  double dt_min = 1e-10;
  StepperOptions stepper;
};

/// Adaptive integration to t_end with step-doubling error control.
/// observer(state) is called after every accepted step.
ModelState advance_model(const ModelState& state, double t_end,
                         const AdvanceOptions& opts = {},
                         const std::function<void(const ModelState&)>& observer = {});

}  // namespace filmcascade

#pragma once

#include <vector>

#include "filmcascade/models.hpp"
#include "filmcascade/params.hpp"

namespace filmcascade {

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear growth lambda(k) of the reduced model: the Fourier symbol of its
/// linearised right-hand side, for real k.
cplx dispersion(ModelKind kind, double k, const ScalingParams& p);

struct CriticalReynolds {
  double closed_form = 0.0;  ///< 5 / (4 tan alpha)
  double bisection = 0.0;    ///< root of B1(R) = 0
  bool diverging = false;    ///< alpha small enough that R_c is ill-conditioned
};

/// Requires 0 < alpha <= pi/2.
CriticalReynolds critical_reynolds(double alpha);

struct OSProblem {
  double k = 0.0;
  ScalingParams params;
  int ny = 48;
  double drift_tol = 1e-6;  ///< eigenvalue change allowed between ny and 3ny/2
};

/// Eigenvalues of the Navier-Stokes film linearised about the Nusselt flow,
/// Chebyshev collocation in y. Only eigenvalues stable under refinement
/// ny -> 3ny/2 are returned, sorted by descending real part.
std::vector<cplx> os_spectrum(const OSProblem& prob);
/// Unfiltered spectrum at the problem's ny (infinite eigenvalues removed).
std::vector<cplx> os_spectrum_raw(const OSProblem& prob);
cplx leading_os_eigenvalue(const OSProblem& prob);

/// Reynolds number at which the leading growth rate changes sign in
/// [r_lo, r_hi]; throws DomainError without a sign change.
double model_neutral_reynolds(ModelKind kind, double k, ScalingParams p, double r_lo,
                              double r_hi, double tol = 1e-12);
double os_neutral_reynolds(OSProblem prob, double r_lo, double r_hi, double tol = 1e-10);

struct NeutralPoint {
  double k = 0.0;
  double reynolds = 0.0;  ///< NaN when no sign change lies in the bracket
};

std::vector<NeutralPoint> model_neutral_curve(ModelKind kind, const std::vector<double>& ks,
                                              const ScalingParams& p, double r_lo, double r_hi);
std::vector<NeutralPoint> os_neutral_curve(const OSProblem& base, const std::vector<double>& ks,
                                           double r_lo, double r_hi);

}  // namespace filmcascade

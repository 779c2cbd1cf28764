#include "filmcascade/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "filmcascade/modeop.hpp"

namespace filmcascade {

cplx dispersion(ModelKind kind, double k, const ScalingParams& p) {
  return model_symbol_at(kind, p, k);
}

namespace {

template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << "no sign change in [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
  while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CriticalReynolds critical_reynolds(double alpha) {
  if (!(alpha > 0.0 && alpha <= std::numbers::pi / 2)) {
    std::ostringstream os;
    os << "critical_reynolds: alpha = " << alpha << " outside (0, pi/2]";
    throw ParameterError(os.str());
  }
  CriticalReynolds c;
  const double inv_tan = alpha == std::numbers::pi / 2 ? 0.0 : 1.0 / std::tan(alpha);
  c.closed_form = 1.25 * inv_tan;
  c.diverging = alpha < 1e-3;
  if (c.closed_form == 0.0) return c;
  auto b1 = [&](double r) { return benney_coefficients(alpha, r, 0.0).B1; };
  c.bisection = bisect(b1, 0.0, 2.0 * c.closed_form + 1.0, 1e-15);
  return c;
}

std::vector<cplx> os_spectrum_raw(const OSProblem& prob) {
  prob.params.validate_ns();
  if (prob.k == 0.0 || !std::isfinite(prob.k)) throw DomainError("os_spectrum: k must be finite and nonzero");
  if (prob.ny < 24) throw DomainError("os_spectrum: ny must be at least 24");
  const Grid g(8, prob.ny);
  const ModeOperator op = mode_operator(g, prob.params, prob.k);
  // Shift near the long-wave phase speed; nudge it if (L - sM) is singular.
  for (double shift_re : {0.37, -1.13, 2.71}) {
    const cplx s(shift_re, -2.0 * prob.k);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op.L - s * op.M);
    const Eigen::MatrixXcd T = lu.solve(op.M);
    if (!T.allFinite()) continue;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, false);
    if (es.info() != Eigen::Success) continue;
    const auto& mu = es.eigenvalues();
    double mmax = 0.0;
    for (int i = 0; i < mu.size(); ++i) mmax = std::max(mmax, std::abs(mu[i]));
    std::vector<cplx> out;
    for (int i = 0; i < mu.size(); ++i)
      if (std::abs(mu[i]) > 1e-10 * mmax) out.push_back(s + 1.0 / mu[i]);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
    return out;
  }
  throw ResolutionError("os_spectrum: shifted operator singular for every trial shift");
}

std::vector<cplx> os_spectrum(const OSProblem& prob) {
  const std::vector<cplx> coarse = os_spectrum_raw(prob);
  OSProblem fine = prob;
  fine.ny = (3 * prob.ny) / 2;
  const std::vector<cplx> ref = os_spectrum_raw(fine);
  std::vector<cplx> out;
  for (cplx l : coarse) {
    double best = std::numeric_limits<double>::infinity();
    for (cplx m : ref) best = std::min(best, std::abs(l - m));
    if (best < prob.drift_tol * std::max(1.0, std::abs(l))) out.push_back(l);
  }
  if (out.empty())
    throw ResolutionError("os_spectrum: no eigenvalue survives ny refinement");
  return out;
}

cplx leading_os_eigenvalue(const OSProblem& prob) { return os_spectrum(prob).front(); }

double model_neutral_reynolds(ModelKind kind, double k, ScalingParams p, double r_lo,
                              double r_hi, double tol) {
  auto f = [&](double r) {
    p.reynolds = r;
    return dispersion(kind, k, p).real();
  };
  return bisect(f, r_lo, r_hi, tol);
}

double os_neutral_reynolds(OSProblem prob, double r_lo, double r_hi, double tol) {
  auto f = [&](double r) {
    prob.params.reynolds = r;
    return leading_os_eigenvalue(prob).real();
  };
  return bisect(f, r_lo, r_hi, tol);
}

std::vector<NeutralPoint> model_neutral_curve(ModelKind kind, const std::vector<double>& ks,
                                              const ScalingParams& p, double r_lo, double r_hi) {
  std::vector<NeutralPoint> out;
  for (double k : ks) {
    NeutralPoint np{k, std::numeric_limits<double>::quiet_NaN()};
    try {
      np.reynolds = model_neutral_reynolds(kind, k, p, r_lo, r_hi);
    } catch (const DomainError&) {
    }
    out.push_back(np);
  }
  return out;
}

std::vector<NeutralPoint> os_neutral_curve(const OSProblem& base, const std::vector<double>& ks,
                                           double r_lo, double r_hi) {
  std::vector<NeutralPoint> out;
  for (double k : ks) {
    OSProblem prob = base;
    prob.k = k;
    NeutralPoint np{k, std::numeric_limits<double>::quiet_NaN()};
    try {
      np.reynolds = os_neutral_reynolds(prob, r_lo, r_hi);
    } catch (const DomainError&) {
    }
    out.push_back(np);
  }
  return out;
}

}  // namespace filmcascade

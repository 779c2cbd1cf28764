#include "filmcascade/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "filmcascade/dual.hpp"

namespace filmcascade {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int padded_size(int nx) {
  int m = (3 * nx + 1) / 2;
  return m + (m % 2);
}

// Benney flux coefficients as functions of the local thickness h:
//   q = c0(h) + delta (c1(h) eta_x + c3(h) eta_xxx).
struct BenneyFlux {
  double inv_tan, r, wt_over_sin, delta;

  template <typename T>
  T c0(T h) const { return -(2.0 / 3.0) * ipow(h, 3); }
  template <typename T>
  T c1(T h) const {
    return (2.0 / 3.0 * inv_tan) * ipow(h, 3) - (8.0 * r / 15.0) * ipow(h, 6);
  }
  template <typename T>
  T c3(T h) const { return -(2.0 / 3.0 * wt_over_sin) * ipow(h, 3); }
};

BenneyFlux benney_flux(const ScalingParams& p) {
  return {p.inv_tan_alpha(), p.reynolds,
          p.delta * p.delta * p.weber / std::sin(p.alpha), p.delta};
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// (1+e)^k - 1 - [with_linear] k e, by expansion so small e loses nothing.
double pow_minus_one(double e, int k, bool drop_linear) {
  double acc = 0.0, ep = e;
  for (int m = 1; m <= k; ++m, ep *= e) {
    if (m == 1 && drop_linear) continue;
    acc += binom(k, m) * ep;
  }
  return acc;
}

// ETDRK4 phi-type coefficients by contour averaging around z.
struct EtdCoef {
  cplx q, f1, f2, f3;
};

EtdCoef etd_coefficients(cplx z, double h, int m) {
  cplx q(0.0), f1(0.0), f2(0.0), f3(0.0);
  for (int j = 0; j < m; ++j) {
    const double th = std::numbers::pi * (j + 0.5) / m * 2.0;
    const cplx r = z + std::polar(1.0, th);
    const cplx er = std::exp(r);
    const cplx r3 = r * r * r;
    q += (std::exp(r / 2.0) - 1.0) / r;
    f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
    f2 += (2.0 + r + er * (r - 2.0)) / r3;
    f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
  }
  const double s = h / m;
  // Real z has a real contour average; drop the rounding residue.
  EtdCoef c{q * s, f1 * s, f2 * s, f3 * s};
  if (z.imag() == 0.0) {
    c.q = c.q.real();
    c.f1 = c.f1.real();
    c.f2 = c.f2.real();
    c.f3 = c.f3.real();
  }
  return c;
}

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Burgers: return "burgers";
    case ModelKind::KdVBurgers: return "kdvb";
    case ModelKind::Kawahara: return "kawahara";
    case ModelKind::Benney: return "benney";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "burgers") return ModelKind::Burgers;
  if (s == "kdvb" || s == "kdv-burgers" || s == "kdvburgers") return ModelKind::KdVBurgers;
  if (s == "kawahara") return ModelKind::Kawahara;
  if (s == "benney") return ModelKind::Benney;
  throw ParameterError("unknown model kind '" + s + "'");
}

ModelCoefficients benney_coefficients(double alpha, double R, double W) {
  if (!(alpha > 0.0 && alpha <= std::numbers::pi / 2 + 1e-15))
    throw ParameterError("benney_coefficients: alpha must lie in (0, pi/2]");
  if (!(R >= 0.0)) throw ParameterError("benney_coefficients: R must be >= 0");
  if (!(W >= 0.0)) throw ParameterError("benney_coefficients: W must be >= 0");
  ScalingParams tmp;
  tmp.alpha = alpha;
  const double it = tmp.inv_tan_alpha();
  const double s = (std::abs(alpha - std::numbers::pi / 2) < 1e-14) ? 1.0 : std::sin(alpha);
  ModelCoefficients c;
  c.B1 = 8.0 / 15.0 * (5.0 / 4.0 * it - R);
  c.D1 = -2.0 - 22.0 / 63.0 * R * R + 40.0 / 63.0 * R * it;
  c.G1 = -2.0 / 3.0 * W / s - 157.0 / 56.0 * R - 8.0 / 45.0 * R * it * it +
         138904.0 / 155925.0 * R * R * it - 1213952.0 / 2027025.0 * R * R * R;
  return c;
}

cplx model_symbol(ModelKind kind, const ScalingParams& p, int n) {
  return model_symbol_at(kind, p, kTwoPi * n);
}

cplx model_symbol_at(ModelKind kind, const ScalingParams& p, double k) {
  const cplx ik(0.0, k);
  const double d = p.delta;
  if (kind == ModelKind::Benney) {
    const BenneyFlux fl = benney_flux(p);
    const Dual h(1.0, 1.0);
    const double dc0 = fl.c0(h).d;
    const double c1 = fl.c1(Dual(1.0)).v;
    const double c3 = fl.c3(Dual(1.0)).v;
    // d_x[c0'(1) eta + delta (c1(1) eta_x + c3(1) eta_xxx)]
    return ik * (dc0 + d * (c1 * ik + c3 * ik * ik * ik));
  }
  const ModelCoefficients c = benney_coefficients(p.alpha, p.reynolds, p.weber);
  cplx l = -2.0 * ik + d * c.B1 * ik * ik;
  if (kind == ModelKind::KdVBurgers || kind == ModelKind::Kawahara)
    l += d * d * c.D1 * ik * ik * ik;
  if (kind == ModelKind::Kawahara) l += d * d * d * c.G1 * ik * ik * ik * ik;
  return l;
}

// ---- ModelStepper ----------------------------------------------------------

ModelStepper::ModelStepper(ModelKind kind, const ScalingParams& params, int nx,
                           StepperOptions opts)
    : kind_(kind), params_(params), nx_(nx), opts_(opts), fft_(nx),
      pad_fft_(padded_size(nx)) {
  params_.validate();
  lin_.resize(nx / 2 + 1);
  for (int n = 0; n <= nx / 2; ++n) lin_[n] = model_symbol(kind, params_, n);
  // Nyquist carries no derivative information; keep it inert.
  lin_[nx / 2] = 0.0;
}

SurfaceField ModelStepper::nonlinear(const SurfaceField& eta) const {
  SurfaceField out(nx_);
  if (opts_.linear_only) return out;
  const int nm = nx_ / 2 + 1;
  if (kind_ != ModelKind::Benney) {
    const double eps = params_.epsilon;
    if (eps == 0.0) return out;
    // -4 eps eta eta_x = d_x(-2 eps eta^2)
    SurfaceField ed = dealias(eta);
    std::vector<double> e = fft_.inverse(ed);
    for (double& v : e) v = -2.0 * eps * v * v;
    SurfaceField f = dealias(fft_.forward(e));
    for (int n = 0; n < nm; ++n) out.coef[n] = cplx(0.0, kTwoPi * n) * f.coef[n];
    out.coef[nm - 1] = 0.0;
    return out;
  }
  // Benney: pointwise flux on the 3/2-padded grid.
  const int mp = pad_fft_.size();
  SurfaceField pe(mp), px(mp), pxxx(mp);
  for (int n = 0; n < nx_ / 2; ++n) {
    const cplx ik(0.0, kTwoPi * n);
    pe.coef[n] = eta.coef[n];
    px.coef[n] = ik * eta.coef[n];
    pxxx.coef[n] = ik * ik * ik * eta.coef[n];
  }
  const std::vector<double> e = pad_fft_.inverse(pe);
  const std::vector<double> ex = pad_fft_.inverse(px);
  const std::vector<double> exxx = pad_fft_.inverse(pxxx);
  const BenneyFlux fl = benney_flux(params_);
  const double d = params_.delta;
  std::vector<double> q(mp);
  for (int i = 0; i < mp; ++i) {
    if (!(1.0 + e[i] > 0.0)) {
      std::ostringstream os;
      os << "Benney: film rupture (1 + eta = " << 1.0 + e[i] << ")";
      throw FilmRuptureError(os.str());
    }
    const double p3 = pow_minus_one(e[i], 3, false);
    const double q3 = pow_minus_one(e[i], 3, true);
    const double p6 = pow_minus_one(e[i], 6, false);
    // Flux minus its linearisation about eta = 0.
    q[i] = -(2.0 / 3.0) * q3 +
           d * ((2.0 / 3.0 * fl.inv_tan) * p3 * ex[i] - (8.0 * fl.r / 15.0) * p6 * ex[i] -
                (2.0 / 3.0 * fl.wt_over_sin) * p3 * exxx[i]);
  }
  const SurfaceField qh = pad_fft_.forward(q);
  for (int n = 0; n < nx_ / 2; ++n) out.coef[n] = cplx(0.0, kTwoPi * n) * qh.coef[n];
  return out;
}

void ModelStepper::prepare(double h) {
  if (c_.h == h) return;
  const int nm = nx_ / 2 + 1;
  c_.h = h;
  c_.e.resize(nm);
  c_.e2.resize(nm);
  c_.q.resize(nm);
  c_.f1.resize(nm);
  c_.f2.resize(nm);
  c_.f3.resize(nm);
  for (int n = 0; n < nm; ++n) {
    const cplx z = lin_[n] * h;
    c_.e[n] = std::exp(z);
    c_.e2[n] = std::exp(z / 2.0);
    const EtdCoef ec = etd_coefficients(z, h, opts_.contour_points);
    c_.q[n] = ec.q;
    c_.f1[n] = ec.f1;
    c_.f2[n] = ec.f2;
    c_.f3[n] = ec.f3;
  }
}

ModelState ModelStepper::step(const ModelState& s, double dt) {
  if (!(dt > 0.0)) throw ParameterError("step_model: dt must be positive");
  if (s.eta.nx != nx_) throw ParameterError("step_model: grid size mismatch");
  prepare(dt);
  const int nm = nx_ / 2 + 1;
  const SurfaceField& u = s.eta;
  SurfaceField a(nx_), b(nx_), c(nx_), un(nx_);
  const SurfaceField nu = nonlinear(u);
  for (int n = 0; n < nm; ++n) a.coef[n] = c_.e2[n] * u.coef[n] + c_.q[n] * nu.coef[n];
  const SurfaceField na = nonlinear(a);
  for (int n = 0; n < nm; ++n) b.coef[n] = c_.e2[n] * u.coef[n] + c_.q[n] * na.coef[n];
  const SurfaceField nb = nonlinear(b);
  for (int n = 0; n < nm; ++n)
    c.coef[n] = c_.e2[n] * a.coef[n] + c_.q[n] * (2.0 * nb.coef[n] - nu.coef[n]);
  const SurfaceField nc = nonlinear(c);
  for (int n = 0; n < nm; ++n)
    un.coef[n] = c_.e[n] * u.coef[n] + c_.f1[n] * nu.coef[n] +
                 2.0 * c_.f2[n] * (na.coef[n] + nb.coef[n]) + c_.f3[n] * nc.coef[n];
  // Mean mode: L(0) = 0 and N(0) = 0, so copy it to keep mass bit-exact.
  un.coef[0] = u.coef[0];
  un.coef[nm - 1] = u.coef[nm - 1];
  ModelState out = s;
  out.eta = std::move(un);
  out.t = s.t + dt;
  for (const cplx& v : out.eta.coef)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << to_string(kind_) << ": non-finite state at t = " << out.t;
      throw BlowUpError(os.str(), out.t);
    }
  return out;
}

double ModelStepper::stability_limit(const ModelState& s) const {
  if (opts_.linear_only) return std::numeric_limits<double>::infinity();
  const std::vector<double> e = fft_.inverse(s.eta);
  double amax = 0.0;
  for (double v : e) amax = std::max(amax, std::abs(v));
  const double kmax = kTwoPi * nx_ / 3.0;
  double rate;
  if (kind_ != ModelKind::Benney) {
    rate = 4.0 * params_.epsilon * amax * kmax;
  } else {
    const BenneyFlux fl = benney_flux(params_);
    const double h3 = std::pow(1.0 + amax, 3) - 1.0;
    const double h6 = std::pow(1.0 + amax, 6) - 1.0;
    rate = 2.0 * (std::pow(1.0 + amax, 2) - 1.0) * kmax +
           params_.delta * ((2.0 / 3.0) * fl.inv_tan * h3 + 8.0 * fl.r / 15.0 * h6) * kmax * kmax +
           params_.delta * (2.0 / 3.0) * fl.wt_over_sin * h3 * std::pow(kmax, 4);
  }
  // ETDRK4's explicit stability region reaches about 2.8 along the axes.
  return rate > 0.0 ? 2.8 / rate : std::numeric_limits<double>::infinity();
}

ModelState step_model(const ModelState& state, double dt, StepperOptions opts) {
  ModelStepper st(state.kind, state.params, state.eta.nx, opts);
  const double lim = st.stability_limit(state);
  if (dt > lim) {
    std::ostringstream os;
    os << "step_model: dt = " << dt << " exceeds stability limit " << lim;
    throw ParameterError(os.str());
  }
  return st.step(state, dt);
}

ModelState advance_model(const ModelState& state, double t_end, const AdvanceOptions& opts,
                         const std::function<void(const ModelState&)>& observer) {
  if (t_end < state.t) throw ParameterError("advance_model: t_end before current time");
  ModelStepper st(state.kind, state.params, state.eta.nx, opts.stepper);
  ModelStepper half(state.kind, state.params, state.eta.nx, opts.stepper);
  ModelState s = state;
  double dt = std::min(opts.dt_initial, opts.dt_max);
  const double span = t_end - state.t;
  while (s.t < t_end - 1e-14 * std::max(1.0, span)) {
    double h = std::min({dt, t_end - s.t, st.stability_limit(s)});
    const ModelState full = st.step(s, h);
    const ModelState mid = half.step(s, h / 2.0);
    ModelState two = half.step(mid, h / 2.0);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < two.eta.coef.size(); ++n) {
      num = std::max(num, std::abs(two.eta.coef[n] - full.eta.coef[n]));
      den = std::max(den, std::abs(two.eta.coef[n]));
    }
    const double err = num / std::max(1.0, den);
    if (err <= opts.tol || h <= opts.dt_min) {
      // Local extrapolation of the step-doubling pair.
      for (std::size_t n = 1; n < two.eta.coef.size(); ++n)
        two.eta.coef[n] += (two.eta.coef[n] - full.eta.coef[n]) / 15.0;
      two.t = (h == t_end - s.t) ? t_end : s.t + h;
      s = std::move(two);
      if (observer) observer(s);
      const double grow = err > 0.0 ? 0.9 * std::pow(opts.tol / err, 0.2) : 2.0;
      dt = std::min(opts.dt_max, h * std::clamp(grow, 0.2, 2.0));
    } else {
      dt = h * std::clamp(0.9 * std::pow(opts.tol / err, 0.2), 0.1, 0.9);
      if (dt < opts.dt_min) {
        std::ostringstream os;
        os << to_string(s.kind) << ": step size underflow at t = " << s.t;
        throw BlowUpError(os.str(), s.t);
      }
    }
  }
  return s;
}

}  // namespace filmcascade

namespace filmcascade {

SurfaceField model_rhs(const ModelState& state) {
  ModelStepper st(state.kind, state.params, state.eta.nx);
  SurfaceField out = st.nonlinear(state.eta);
  for (int n = 0; n < out.nmodes() - 1; ++n)
    out.coef[n] += model_symbol(state.kind, state.params, n) * state.eta.coef[n];
  return out;
}

}  // namespace filmcascade

#include "filmcascade/nssolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "filmcascade/fieldops.hpp"
#include "filmcascade/models.hpp"
#include "filmcascade/modeop.hpp"
#include "filmcascade/transform.hpp"

namespace filmcascade {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BulkField dx(const Grid& g, const BulkField& f, int k = 1) {
  return differentiate(g, f, Axis::X, k);
}
BulkField dy(const Grid& g, const BulkField& f, int k = 1) {
  return differentiate(g, f, Axis::Y, k);
}

double max_abs_vec(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Explicit terms of one state. Bulk rows are dealiased; the surface rows
// are kept whole so that they hold exactly at the collocation points.
struct Explicit {
  BulkField nu, nv;             // interior x- and y-momentum
  std::vector<double> tang;     // -(b3 eta + h1)
  std::vector<double> normal;   // -h2
  std::vector<double> h3;
};

Explicit explicit_terms(const Grid& g, const NSState& s, double sigma) {
  const ScalingParams& p = s.params;
  const double R = p.reynolds, d = p.delta;
  Explicit e;
  const int nx = g.nx();
  if (p.epsilon == 0.0) {
    e.nu = e.nv = g.zeros();
    if (sigma != 0.0) e.nu = (-sigma / R) * dy(g, s.u, 2);
    e.tang.assign(nx, 0.0);
    e.normal.assign(nx, 0.0);
    e.h3.assign(nx, 0.0);
    return e;
  }
  const TransformAssembly tr = build_transform(g, s.eta, p);
  const BoundaryTerms bt = assemble_boundary_terms(g, s, tr);
  const VecField f = assemble_forcing(g, s, tr);
  const VecField gp{d * dx(g, s.p), dy(g, s.p)};
  const VecField a4gp = tr.A4.apply(gp);
  const BulkField uyy = dy(g, s.u, 2);
  e.nu = f.x - (2.0 / R) * dealias(g, a4gp.x) + (1.0 / R) * (dealias(g, tr.b2 * uyy) - sigma * uyy);
  e.nv = f.y - (2.0 / R) * dealias(g, a4gp.y);
  const std::vector<double> eta = g.ifft(s.eta);
  e.tang.resize(nx);
  e.normal.resize(nx);
  for (int i = 0; i < nx; ++i) {
    e.tang[i] = -(bt.b3[i] * eta[i] + bt.h1[i]);
    e.normal[i] = -bt.h2[i];
  }
  e.h3 = bt.h3;
  return e;
}

double b2_max(const Grid& g, const NSState& s) {
  if (s.params.epsilon == 0.0) return 0.0;
  return max_abs(build_transform(g, s.eta, s.params).b2);
}

// Spectral images of the explicit terms, split by row type.
struct ExplicitHat {
  BulkSpectrum nu, nv;
  SurfaceField tang, normal, h3;
};

ExplicitHat to_hat(const Grid& g, const Explicit& e) {
  return {g.fft(e.nu), g.fft(e.nv), g.fft(e.tang), g.fft(e.normal), g.fft(e.h3)};
}

struct StateHat {
  BulkSpectrum u, v, p;
  SurfaceField eta;
};

StateHat to_hat(const Grid& g, const NSState& s) {
  return {g.fft(s.u), g.fft(s.v), g.fft(s.p), s.eta};
}

Eigen::VectorXcd pack_state(const StateHat& h, int n, int ny) {
  Eigen::VectorXcd x(3 * ny + 1);
  for (int j = 0; j < ny; ++j) {
    x[j] = h.u(n, j);
    x[ny + j] = h.v(n, j);
    x[2 * ny + j] = h.p(n, j);
  }
  x[3 * ny] = h.eta.coef[n];
  return x;
}

// Differential rows of N at mode n (algebraic rows zero).
Eigen::VectorXcd pack_differential(const ExplicitHat& e, int n, int ny) {
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(3 * ny + 1);
  const int top = ny - 1;
  for (int j = 1; j < top; ++j) {
    b[j] = e.nu(n, j);
    b[ny + j] = e.nv(n, j);
  }
  if (n == 0) b[2 * ny + top] = e.nv(0, top);
  b[3 * ny] = e.h3.coef[n];
  return b;
}

// Right-hand side of the algebraic surface rows, L x = -N.
void add_algebraic(Eigen::VectorXcd& b, const ExplicitHat& e, int n, int ny) {
  const int top = ny - 1;
  b[top] -= e.tang.coef[n];
  b[ny + top] -= e.normal.coef[n];
}

NSState unpack(const Grid& g, const std::vector<Eigen::VectorXcd>& xs, const NSState& like) {
  const int ny = g.ny();
  BulkSpectrum u(g.nx(), ny), v(g.nx(), ny), p(g.nx(), ny);
  SurfaceField eta(g.nx());
  for (std::size_t n = 0; n < xs.size(); ++n) {
    const int m = static_cast<int>(n);
    for (int j = 0; j < ny; ++j) {
      u(m, j) = xs[n][j];
      v(m, j) = xs[n][ny + j];
      p(m, j) = xs[n][2 * ny + j];
    }
    eta.coef[n] = xs[n][3 * ny];
  }
  // Real fields carry real mean modes.
  for (int j = 0; j < ny; ++j) {
    u(0, j) = u(0, j).real();
    v(0, j) = v(0, j).real();
    p(0, j) = p(0, j).real();
  }
  eta.coef[0] = eta.coef[0].real();
  NSState s = like;
  s.u = g.ifft(u);
  s.v = g.ifft(v);
  s.p = g.ifft(p);
  s.eta = eta;
  return s;
}

double explicit_gap(const ExplicitHat& a, const ExplicitHat& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.tang.coef.size(); ++n) {
    m = std::max(m, std::abs(a.tang.coef[n] - b.tang.coef[n]));
    m = std::max(m, std::abs(a.normal.coef[n] - b.normal.coef[n]));
  }
  return m;
}

bool all_finite(const NSState& s) {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  for (cplx c : s.eta.coef)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return ok(s.u.data) && ok(s.v.data) && ok(s.p.data);
}

double divergence_residual(const Grid& g, const NSState& s) {
  return max_abs(dx(g, s.u) + dy(g, s.v));
}

}  // namespace

double default_dt(const Grid& g) { return 0.5 / g.nx(); }

// ---- compatibility and rates ------------------------------------------------

StepInfo surface_residuals(const Grid& g, const NSState& s) {
  const ScalingParams& p = s.params;
  const double d = p.delta, d2 = d * d;
  const TransformAssembly tr = build_transform(g, s.eta, p);
  const BoundaryTerms bt = assemble_boundary_terms(g, s, tr);
  const std::vector<double> eta = g.ifft(s.eta);
  const std::vector<double> eta_xx = g.ifft(differentiate(s.eta, 2));
  const std::vector<double> uy = dy(g, s.u).top(), vx = dx(g, s.v).top(), vy = dy(g, s.v).top();
  const std::vector<double> pt = s.p.top();
  const double inv_sin = 1.0 / std::sin(p.alpha);
  StepInfo r;
  for (int i = 0; i < g.nx(); ++i) {
    const double tang = uy[i] + d2 * vx[i] - (2.0 + bt.b3[i]) * eta[i] - bt.h1[i];
    const double norm = pt[i] - d * vy[i] - p.inv_tan_alpha() * eta[i] +
                        p.surface_tension() * inv_sin * eta_xx[i] - bt.h2[i];
    r.tangential = std::max(r.tangential, std::abs(tang));
    r.normal = std::max(r.normal, std::abs(norm));
  }
  r.divergence = divergence_residual(g, s);
  return r;
}

CompatibilityReport check_compatibility(const Grid& g, const NSState& s) {
  CompatibilityReport c;
  c.divergence = divergence_residual(g, s);
  c.tangential = surface_residuals(g, s).tangential;
  c.no_slip = std::max(max_abs_vec(s.u.bottom()), max_abs_vec(s.v.bottom()));
  c.pass = c.divergence < 1e-8 && c.tangential < 1e-8 && c.no_slip < 1e-8;
  return c;
}

NSState compatible_initial_state(const Grid& g, const SurfaceField& eta0, const ScalingParams& p,
                                 int max_iter) {
  p.validate_ns();
  const int ny = g.ny(), nm = g.nmodes();
  NSState s = zero_state(g, p);
  s.eta = eta0;
  s.eta.coef[nm - 1] = 0.0;
  // Reduced operators: drop the kinematic row and the eta column.
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lus;
  std::vector<Eigen::VectorXcd> eta_col;
  for (int n = 0; n < nm - 1; ++n) {
    const ModeOperator op = mode_operator(g, p, kTwoPi * n);
    const int m = 3 * ny;
    lus.emplace_back(op.L.topLeftCorner(m, m));
    eta_col.push_back(op.L.block(0, op.ieta(), m, 1));
  }
  double prev_gap = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const ExplicitHat e = to_hat(g, explicit_terms(g, s, 0.0));
    std::vector<Eigen::VectorXcd> xs(nm - 1);
    for (int n = 0; n < nm - 1; ++n) {
      Eigen::VectorXcd b = -pack_differential(e, n, ny);
      add_algebraic(b, e, n, ny);
      const Eigen::VectorXcd rhs = b.head(3 * ny) - eta_col[n] * s.eta.coef[n];
      xs[n].resize(3 * ny + 1);
      xs[n].head(3 * ny) = lus[n].solve(rhs);
      xs[n][3 * ny] = s.eta.coef[n];
    }
    const NSState next = unpack(g, xs, s);
    const double gap = std::max({max_abs(next.u - s.u), max_abs(next.v - s.v), max_abs(next.p - s.p)});
    s = next;
    const double scale = std::max({1.0, max_abs(s.u), max_abs(s.v), max_abs(s.p)});
    if (p.epsilon == 0.0 || gap < 1e-13 * scale) break;
    if (it > 3 && gap > prev_gap && gap > 1e-10 * scale)
      throw DomainError("compatible_initial_state: fixed point does not contract");
    prev_gap = gap;
  }
  return s;
}

NSRates ns_rates(const Grid& g, const NSState& s, bool with_p_t, double jvp_step) {
  const ScalingParams& p = s.params;
  const double d = p.delta, d2 = d * d, R = p.reynolds;
  const TransformAssembly tr = build_transform(g, s.eta, p);
  const VecField f = p.epsilon == 0.0 ? VecField{g.zeros(), g.zeros()} : assemble_forcing(g, s, tr);
  const BulkField ub = nusselt_field(g), uby = nusselt_slope_field(g);
  const VecField gp{d * dx(g, s.p), dy(g, s.p)};
  const VecField a4gp = tr.A4.apply(gp);
  const VecField a6gp{gp.x + dealias(g, a4gp.x), gp.y + dealias(g, a4gp.y)};
  const BulkField ux = dx(g, s.u), vx = dx(g, s.v);
  const BulkField uyy = dy(g, s.u, 2);
  const BulkField b2uyy = p.epsilon == 0.0 ? g.zeros() : dealias(g, tr.b2 * uyy);
  NSRates r;
  const BulkField mx = (-d) * fma(ub, ux, s.v * uby) - (2.0 / R) * a6gp.x +
                       (1.0 / R) * (d2 * dx(g, s.u, 2) + uyy + b2uyy) + f.x;
  const BulkField my = (-d2) * (ub * vx) - (2.0 / R) * a6gp.y +
                       (1.0 / R) * (d2 * d * dx(g, s.v, 2) + d * dy(g, s.v, 2)) + f.y;
  r.u_t = (1.0 / d) * mx;
  r.v_t = (1.0 / d2) * my;
  for (int i = 0; i < g.nx(); ++i) {
    r.u_t(i, 0) = 0.0;
    r.v_t(i, 0) = 0.0;
  }
  r.eta_t = kinematic_rate(g, s);
  r.p_t = g.zeros();
  if (with_p_t) {
    const BulkField pp = pressure_of_state(g, advance_along(s, r, jvp_step));
    const BulkField pm = pressure_of_state(g, advance_along(s, r, -jvp_step));
    r.p_t = (0.5 / jvp_step) * (pp - pm);
    r.has_p_t = true;
  }
  return r;
}

// ---- stepper ------------------------------------------------------------------

struct NSStepper::Impl {
  // One factorisation per (step size, implicitness) pair.
  struct Factored {
    double h = 0.0, theta = 1.0;
    bool bdf = false;  ///< B holds M / h for the BDF2 history instead
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu;
    std::vector<Eigen::MatrixXcd> B;
  };

  const Grid& g;
  ScalingParams params;
  NSOptions opts;
  double dt = 0.0;
  double sigma = 0.0;
  bool factored = false;
  Factored main, half;
  bool has_prev = false;
  ExplicitHat prev;
  StateHat prev_x;  ///< state at the start of the previous step (BDF2)
  int steps_done = 0;

  Impl(const Grid& grid, const ScalingParams& p, NSOptions o) : g(grid), params(p), opts(o) {
    params.validate_ns();
    dt = opts.dt > 0.0 ? opts.dt : default_dt(g);
    sigma = opts.sigma >= 0.0 ? opts.sigma : 0.0;
  }

  Factored build(double h, double theta, bool bdf = false) const {
    Factored f;
    f.h = h;
    f.theta = theta;
    f.bdf = bdf;
    for (int n = 0; n < g.nmodes() - 1; ++n) {
      const ModeOperator op = mode_operator(g, params, kTwoPi * n, sigma);
      const int sz = op.size();
      Eigen::MatrixXcd A(sz, sz), Bn = Eigen::MatrixXcd::Zero(sz, sz);
      for (int r = 0; r < sz; ++r) {
        if (op.algebraic[r]) {
          A.row(r) = op.L.row(r);
          continue;
        }
        for (int c = 0; c < sz; ++c) {
          const bool pcol = c >= op.ip(0) && c < op.ieta();
          const cplx m = op.M(r, c) / h, l = op.L(r, c);
          if (pcol) {
            A(r, c) = m - l;
            Bn(r, c) = m;
          } else if (bdf) {
            A(r, c) = 1.5 * m - l;
            Bn(r, c) = m;
          } else {
            A(r, c) = m - theta * l;
            Bn(r, c) = m + (1.0 - theta) * l;
          }
        }
      }
      f.lu.emplace_back(A);
      f.B.push_back(std::move(Bn));
    }
    return f;
  }

  bool cn() const { return opts.scheme == NSScheme::CNAB2; }
  bool bdf() const { return opts.scheme == NSScheme::SBDF2; }
  bool starting() const {
    return (cn() || bdf()) && (steps_done < std::max(opts.startup_steps, bdf() ? 1 : 0) || !has_prev);
  }

  void factor() {
    main = build(dt, cn() ? 0.5 : 1.0, bdf());
    half = Factored{};
    factored = true;
  }

  // One level of the scheme described by f; ab2 extrapolates the
  // differential explicit terms from prev.
  NSState advance(const NSState& s, const Factored& f, const ExplicitHat& now, bool ab2, int& iters) {
    const int ny = g.ny(), nm = g.nmodes();
    const StateHat xh = to_hat(g, s);
    std::vector<Eigen::VectorXcd> base(nm - 1);
    for (int n = 0; n < nm - 1; ++n) {
      Eigen::VectorXcd nd = pack_differential(now, n, ny);
      if (f.bdf) {
        nd = 2.0 * nd - pack_differential(prev, n, ny);
        base[n] = f.B[n] * (2.0 * pack_state(xh, n, ny) - 0.5 * pack_state(prev_x, n, ny)) + nd;
        continue;
      }
      if (ab2) nd = 1.5 * nd - 0.5 * pack_differential(prev, n, ny);
      base[n] = f.B[n] * pack_state(xh, n, ny) + nd;
    }

    // Surface rows at the new level: Picard on their explicit part.
    ExplicitHat surf = now;
    NSState next;
    const int max_it = params.epsilon == 0.0 ? 1 : std::max(1, opts.surface_iterations);
    iters = 0;
    while (iters < max_it) {
      ++iters;
      std::vector<Eigen::VectorXcd> xs(nm - 1);
      for (int n = 0; n < nm - 1; ++n) {
        Eigen::VectorXcd b = base[n];
        add_algebraic(b, surf, n, ny);
        xs[n] = f.lu[n].solve(b);
      }
      next = unpack(g, xs, s);
      next.t = s.t + f.h;
      if (!all_finite(next)) throw BlowUpError("step_ns: non-finite state", next.t);
      if (params.epsilon == 0.0) break;
      const ExplicitHat again = to_hat(g, explicit_terms(g, next, sigma));
      const double gap = explicit_gap(again, surf);
      surf = again;
      if (gap < opts.surface_tol) break;
    }
    return next;
  }

  void step(NSState& s, StepInfo* info) {
    if (opts.sigma < 0.0) {
      const double need = b2_max(g, s);
      if (!factored || need > sigma) {
        if (factored) has_prev = false;  // the history used the old sigma; restart
        sigma = std::max(sigma, 2.0 * need);
        factored = false;
      }
    }
    if (!factored) factor();
    const ExplicitHat now = to_hat(g, explicit_terms(g, s, sigma));
    NSState next;
    int iters = 0;
    double gap = -1.0;
    if (starting()) {
      // Multistep start. Crank-Nicolson barely damps stiff viscous modes
      // (amplification near -1), so its first steps are two backward Euler
      // half steps each (Rannacher); BDF2 needs one step of history.
      if (half.lu.empty()) half = build(0.5 * dt, 1.0);
      int it2 = 0;
      const NSState mid = advance(s, half, now, false, iters);
      next = advance(mid, half, to_hat(g, explicit_terms(g, mid, sigma)), false, it2);
      iters = std::max(iters, it2);
      next.t = s.t + dt;
    } else {
      next = advance(s, main, now, cn(), iters);
    }
    // The coupled pressure is the multiplier of the discrete momentum
    // balance (time-averaged under Crank-Nicolson, with lagged explicit
    // terms otherwise). Multistep schemes carry the elliptic pressure of the
    // new state instead; it enters no history.
    if (cn() || bdf()) {
      const BulkField pc = next.p;
      next.p = pressure_of_state(g, next);
      gap = max_abs(next.p - pc);
    } else if (opts.check_pressure) {
      gap = max_abs(next.p - pressure_of_state(g, next));
    }
    prev = now;
    prev_x = to_hat(g, s);
    has_prev = true;
    ++steps_done;

    const double div = divergence_residual(g, next);
    if (!(div < opts.divergence_tol)) {
      std::ostringstream os;
      os << "step_ns: divergence residual " << div << " above " << opts.divergence_tol;
      throw DomainError(os.str());
    }
    if (info) {
      *info = surface_residuals(g, next);
      info->divergence = div;
      info->surface_iterations = iters;
      info->pressure_gap = gap;
    }
    s = std::move(next);
  }
};

NSStepper::NSStepper(const Grid& g, const ScalingParams& p, NSOptions opts)
    : impl_(std::make_unique<Impl>(g, p, opts)) {}
NSStepper::~NSStepper() = default;
NSStepper::NSStepper(NSStepper&&) noexcept = default;
NSStepper& NSStepper::operator=(NSStepper&&) noexcept = default;

void NSStepper::step(NSState& s, StepInfo* info) { impl_->step(s, info); }
double NSStepper::dt() const { return impl_->dt; }
double NSStepper::sigma() const { return impl_->sigma; }

NSState step_ns(const Grid& g, const NSState& s, double dt) {
  NSOptions o;
  o.dt = dt;
  o.scheme = NSScheme::IMEX1;
  NSStepper st(g, s.params, o);
  NSState out = s;
  st.step(out);
  return out;
}

// ---- runs ---------------------------------------------------------------------

namespace {

NSDiagRow diag_row(const Grid& g, const NSState& s, const NSRunOptions& o,
                   std::vector<EnergyReport>* reports) {
  NSDiagRow r;
  r.t = s.t;
  r.divergence = divergence_residual(g, s);
  r.mass = s.eta.coef[0].real();
  r.max_eta = max_abs_vec(g.ifft(s.eta));
  if (o.energy) {
    const NSRates rates = ns_rates(g, s);
    const EnergyReport e = energy_report(g, s, &rates, o.energy_order, o.weights);
    r.E0 = e.E0;
    r.F0 = e.F0;
    r.E2 = e.Em;
    r.F2 = e.Fm;
    r.N2 = e.Nm;
    reports->push_back(e);
  }
  return r;
}

}  // namespace

NSTrajectory run_ns(const Grid& g, const NSState& init, const NSRunOptions& opts) {
  NSTrajectory tr;
  tr.snapshots.push_back(init);
  tr.rows.push_back(diag_row(g, init, opts, &tr.reports));
  if (!(opts.t_end > 0.0)) return tr;
  NSOptions so = opts.step;
  const double dt0 = so.dt > 0.0 ? so.dt : default_dt(g);
  const long steps = std::max(1L, static_cast<long>(std::ceil(opts.t_end / dt0 - 1e-9)));
  so.dt = opts.t_end / static_cast<double>(steps);
  NSStepper st(g, init.params, so);
  NSState s = init;
  const double t0 = init.t;
  try {
    for (long k = 1; k <= steps; ++k) {
      st.step(s);
      s.t = t0 + static_cast<double>(k) * so.dt;
      const bool last = k == steps;
      if (last || (opts.diag_every > 0 && k % opts.diag_every == 0))
        tr.rows.push_back(diag_row(g, s, opts, &tr.reports));
      if (last || (opts.snapshot_every > 0 && k % opts.snapshot_every == 0))
        tr.snapshots.push_back(s);
    }
  } catch (const BlowUpError& e) {
    tr.blew_up = true;
    tr.message = e.what();
  } catch (const GeometryError& e) {
    tr.blew_up = true;
    tr.message = e.what();
  } catch (const PressureSolverError& e) {
    tr.blew_up = true;
    tr.message = e.what();
  }
  if (tr.blew_up) tr.snapshots.push_back(s);
  return tr;
}

std::string trajectory_csv(const NSTrajectory& tr) {
  std::string out = "t,E0,F0,E2,F2,N2,div_residual,mass,max_eta\n";
  char buf[512];
  for (const NSDiagRow& r : tr.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                  r.E0, r.F0, r.E2, r.F2, r.N2, r.divergence, r.mass, r.max_eta);
    out += buf;
  }
  return out;
}

}  // namespace filmcascade

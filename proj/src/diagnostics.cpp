#include "filmcascade/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "filmcascade/fieldops.hpp"
#include "filmcascade/transform.hpp"

namespace filmcascade {

void EnergyWeights::validate() const {
  if (!(beta1 > 0.0 && beta2 > 0.0 && beta3 > 0.0 && korn > 0.0))
    throw ParameterError("EnergyWeights: beta1, beta2, beta3 and K must be positive");
}

EnergyWeights EnergyWeights::estimate_preset(double c1, double r0, double alpha) {
  EnergyWeights w;
  const double K = w.korn, t2 = std::tan(alpha) * std::tan(alpha);
  w.beta2 = 16.0 * K * c1;
  w.beta3 = 16.0 * K * c1 * r0 * r0 * (1.0 + t2);
  w.beta1 = 16.0 * K * (c1 * (1.0 + t2 + r0 * r0) + 12.0 * K * w.beta3);
  w.validate();
  return w;
}

bool EnergyWeights::admissible(double alpha, double weber) const {
  const double t = std::tan(alpha);
  return 48.0 * korn * (beta1 + 3.0 * beta3) * t * t < 1.0 &&
         12.0 * korn * beta2 * t * std::sin(alpha) < weber;
}

namespace {

BulkField dxk(const Grid& g, const BulkField& f, int k) {
  return k == 0 ? f : apply_multiplier(g, Multiplier::derivative(k), f);
}
BulkField dy(const Grid& g, const BulkField& f, int k = 1) {
  return differentiate(g, f, Axis::Y, k);
}
SurfaceField sdx(const SurfaceField& f, int k) {
  return k == 0 ? f : apply_multiplier(Multiplier::derivative(k), f);
}
double ssq(const SurfaceField& f) {
  const double n = surface_norm(f, 0.0);
  return n * n;
}
double bsq(const Grid& g, const BulkField& f) { return bulk_inner(g, f, f); }
double bsq(const Grid& g, const BulkField& f, const Multiplier& p) {
  const double n = bulk_norm(g, f, p);
  return n * n;
}
double sinner(const Grid& g, const SurfaceField& a, const SurfaceField& b) {
  return surface_inner(g.ifft(a), g.ifft(b));
}
SurfaceField top_of(const Grid& g, const BulkField& f) { return g.fft(f.top()); }

// Everything the functionals read, fixed at one instant.
struct Ctx {
  const Grid& g;
  double d, R, W2, inv_tan, inv_sin;  // W2 = delta^2 W
  EnergyWeights w;
  SurfaceField eta, eta_t;
  BulkField u, v, p, u_t, v_t, p_t;
  MatField A5;
  SurfaceField h1, h2, h3, h1t, h2t, h3t, b3e, b3e_t;
  BulkField f1, f2;
  VecField F1, F2;
  std::map<int, VecField> G;
};

// |grad_d c|^2 summed over both components of (a, b).
double grad_sq(const Ctx& c, const BulkField& a, const BulkField& b) {
  const double d2 = c.d * c.d;
  return d2 * (bsq(c.g, dxk(c.g, a, 1)) + bsq(c.g, dxk(c.g, b, 1))) + bsq(c.g, dy(c.g, a)) +
         bsq(c.g, dy(c.g, b));
}

double surface_energy(const Ctx& c, const SurfaceField& e) {
  return 2.0 / c.R * (c.inv_tan * ssq(e) + c.W2 * c.inv_sin * ssq(sdx(e, 1)));
}

double E0k(const Ctx& c, int k) {
  const Grid& g = c.g;
  const double d = c.d, d2 = d * d, d4 = d2 * d2;
  const SurfaceField e = sdx(c.eta, k), et = sdx(c.eta_t, k);
  const BulkField u = dxk(g, c.u, k), v = dxk(g, c.v, k);
  const BulkField ux = dxk(g, u, 1), vx = dxk(g, v, 1);
  const BulkField uxx = dxk(g, u, 2), vxx = dxk(g, v, 2);
  const VecField wt{dxk(g, c.u_t, k), d * dxk(g, c.v_t, k)};
  const VecField a5w = c.A5.apply(wt);
  const double iw = bsq(g, wt.x) + bsq(g, wt.y) - bulk_inner(g, a5w.x, wt.x) -
                    bulk_inner(g, a5w.y, wt.y);
  double E = d2 * bsq(g, v) + surface_energy(c, e);
  E += c.w.beta1 * (d2 * (bsq(g, ux) + d2 * bsq(g, vx)) + d2 * surface_energy(c, sdx(e, 1)));
  E += c.w.beta2 * (d4 * (bsq(g, uxx) + d2 * bsq(g, vxx)) + d4 * surface_energy(c, sdx(e, 2)));
  E += c.w.beta3 * (d2 * iw + d2 * surface_energy(c, et));
  return E;
}

double F0k(const Ctx& c, int k) {
  const Grid& g = c.g;
  const double d = c.d, d3 = d * d * d, R = c.R, K = c.w.korn;
  const BulkField u = dxk(g, c.u, k), v = dxk(g, c.v, k);
  const BulkField ux = dxk(g, u, 1), dvx = d * dxk(g, v, 1);
  const BulkField uxx = dxk(g, u, 2), dvxx = d * dxk(g, v, 2);
  const BulkField ut = dxk(g, c.u_t, k), dvt = d * dxk(g, c.v_t, k);
  const BulkField ipx = antiderivative_y(g, dxk(g, c.p, k + 1));
  const SurfaceField e = sdx(c.eta, k);
  double F = 1.0 / (2.0 * R) * (d * (bsq(g, ux) + bsq(g, dvx)) + 0.5 * d * bsq(g, ipx));
  F += 1.0 / (6.0 * R) *
       (0.5 * c.inv_tan * c.inv_tan * d * ssq(sdx(e, 1)) +
        2.0 * c.W2 * c.inv_tan * c.inv_sin * d * ssq(sdx(e, 2)) +
        c.W2 * c.W2 * c.inv_sin * c.inv_sin * d * ssq(sdx(e, 3)));
  F += 1.0 / (8.0 * K * R) *
       (c.w.beta1 * d * grad_sq(c, ux, dvx) + c.w.beta2 * d3 * grad_sq(c, uxx, dvxx) +
        c.w.beta3 * d * grad_sq(c, ut, dvt));
  return F;
}

double N0k(const Ctx& c, int k) {
  const Grid& g = c.g;
  const double d = c.d, d2 = d * d, d3 = d2 * d, d5 = d3 * d2;
  const SurfaceField h1 = sdx(c.h1, k), h2 = sdx(c.h2, k), h3 = sdx(c.h3, k);
  const SurfaceField h1t = sdx(c.h1t, k), h2t = sdx(c.h2t, k), h3t = sdx(c.h3t, k);
  const SurfaceField be = sdx(c.b3e, k), bet = sdx(c.b3e_t, k);
  const SurfaceField e = sdx(c.eta, k), et = sdx(c.eta_t, k);
  const SurfaceField ut_top = top_of(g, dxk(g, c.u_t, k));
  const SurfaceField dvt_top = top_of(g, d * dxk(g, c.v_t, k));
  auto half = [](const SurfaceField& f) {
    const double n = surface_norm_homogeneous(f, 0.5);
    return n * n;
  };
  double N = (ssq(h1) + ssq(h2)) / d + d * (ssq(sdx(h1, 1)) + ssq(sdx(h2, 1)));
  N += d * ssq(h3) + d3 * ssq(h3t) + d3 * ssq(sdx(h3, 1)) + d5 * ssq(sdx(h3, 2));
  N += d2 * (half(sdx(h1, 1)) + half(sdx(h2, 1))) + d * std::abs(sinner(g, h1t, ut_top)) +
       d * std::abs(sinner(g, h2t, dvt_top));
  N += d * ssq(sdx(be, 1)) + d3 * ssq(sdx(be, 2)) + d * ssq(bet) +
       std::abs(sinner(g, e, sdx(be, 1)));
  SurfaceField mix = h3;
  for (std::size_t n = 0; n < mix.coef.size(); ++n) mix.coef[n] = d * (h3.coef[n] + sdx(be, 1).coef[n]);
  SurfaceField dh3 = h3, dh3xx = sdx(h3, 2), dh3t = h3t;
  for (auto* f : {&dh3, &dh3xx, &dh3t})
    for (cplx& z : f->coef) z *= d;
  N += c.W2 * (std::abs(sinner(g, sdx(e, 2), mix)) / d +
               d3 * std::abs(sinner(g, sdx(e, 4), dh3xx)) +
               d * std::abs(sinner(g, sdx(et, 2), dh3t)));
  const BulkField f1 = dxk(g, c.f1, k), f2 = dxk(g, c.f2, k);
  N += (bsq(g, f1) + bsq(g, f2)) / d + d * bsq(g, dxk(g, f1, 1));
  // (F1x, u^d_x), (F1xx, u^d_xx), (F2, u^d_t) after k further x-derivatives.
  auto vin = [&](const VecField& F, int extra, const BulkField& a, const BulkField& b) {
    return bulk_inner(g, dxk(g, F.x, k + extra), dxk(g, a, k + extra)) +
           bulk_inner(g, dxk(g, F.y, k + extra), d * dxk(g, b, k + extra));
  };
  N += d * std::abs(vin(c.F1, 1, c.u, c.v)) + d3 * std::abs(vin(c.F1, 2, c.u, c.v)) +
       d * std::abs(vin(c.F2, 0, c.u_t, c.v_t));
  return N;
}

Ctx make_ctx(const Grid& g, const NSState& s, const NSRates& r, int m, const EnergyWeights& w) {
  const ScalingParams& p = s.params;
  Ctx c{g, p.delta, p.reynolds, p.surface_tension(), p.inv_tan_alpha(), 1.0 / std::sin(p.alpha), w,
        s.eta, r.eta_t, s.u, s.v, s.p, r.u_t, r.v_t, r.p_t, {}, {}, {}, {}, {}, {}, {}, {}, {},
        {}, {}, {}, {}, {}};
  const TransformAssembly tr = build_transform(g, s.eta, p);
  c.A5 = tr.A5;
  auto surface = [&](const NSState& st) {
    const TransformAssembly t = build_transform(g, st.eta, p);
    const BoundaryTerms bt = assemble_boundary_terms(g, st, t);
    const std::vector<double> eta = g.ifft(st.eta);
    std::vector<double> be(eta.size());
    for (std::size_t i = 0; i < be.size(); ++i) be[i] = bt.b3[i] * eta[i];
    return std::array<SurfaceField, 4>{g.fft(bt.h1), g.fft(bt.h2), g.fft(bt.h3), g.fft(be)};
  };
  const auto now = surface(s);
  c.h1 = now[0];
  c.h2 = now[1];
  c.h3 = now[2];
  c.b3e = now[3];
  // Surface time derivatives along the rates.
  constexpr double h = 1e-6;
  const auto plus = surface(advance_along(s, r, h));
  const auto minus = surface(advance_along(s, r, -h));
  SurfaceField* outs[4] = {&c.h1t, &c.h2t, &c.h3t, &c.b3e_t};
  for (int q = 0; q < 4; ++q) {
    *outs[q] = plus[q];
    for (std::size_t n = 0; n < outs[q]->coef.size(); ++n)
      outs[q]->coef[n] = (plus[q].coef[n] - minus[q].coef[n]) / (2.0 * h);
  }
  BulkTermOptions bo;
  bo.time_terms = true;
  bo.kmax = std::max(1, m);
  const BulkTerms bt = assemble_bulk_terms(g, s, &r, bo);
  c.f1 = bt.sf1;
  c.f2 = bt.sf2;
  c.F1 = bt.F1;
  c.F2 = bt.F2;
  c.G = bt.G;
  return c;
}

}  // namespace

EnergyReport energy_report(const Grid& g, const NSState& s, const NSRates* rates, int m,
                           const EnergyWeights& w) {
  if (!rates || !rates->has_p_t)
    throw ContractError("energy_report: cached time derivatives (u_t, v_t, eta_t, p_t) required");
  if (m < 0 || m > 4) throw ParameterError("energy_report: m must be in 0..4");
  w.validate();
  const Ctx c = make_ctx(g, s, *rates, m, w);
  const double d = c.d, d2 = d * d;
  EnergyReport rep;
  rep.m = m;
  for (int k = 0; k <= m; ++k) {
    const double e = E0k(c, k), f = F0k(c, k), n = N0k(c, k);
    if (k == 0) {
      rep.E0 = e;
      rep.F0 = f;
      rep.N0 = n;
    }
    rep.Em += e;
    rep.Fm += f;
    rep.Nm += n;
  }
  for (int k = 1; k <= m; ++k) {
    const VecField& Gk = c.G.at(k);
    rep.Nm += d * std::abs(bulk_inner(g, Gk.x, dxk(g, c.u_t, k)) +
                           bulk_inner(g, Gk.y, d * dxk(g, c.v_t, k)));
    rep.Nm += std::abs(sinner(g, sdx(c.eta, k), sdx(c.h3, k)));
  }

  const double md = static_cast<double>(m);
  const Multiplier P = Multiplier::one_plus_abs(md);
  const BulkField uy = dy(g, s.u), vy = dy(g, s.v);
  rep.Em_tilde = rep.Em + bsq(g, s.u, P) + bsq(g, uy, P);

  const BulkField px = dxk(g, s.p, 1), py = dy(g, s.p);
  const BulkField ptx = dxk(g, c.p_t, 1), pty = dy(g, c.p_t);
  const Multiplier Pd = P.then(Multiplier::delta_weight(1.0, d));
  const Multiplier Pm1 = Multiplier::one_plus_abs(md - 1.0);
  const double nt = surface_norm(c.eta_t, Multiplier::delta_weight(2.5, d), md);
  const double n72 = surface_norm(s.eta, Multiplier::abs_power(3.5), md);
  rep.Fm_tilde = rep.Fm + d * nt * nt + c.W2 * c.W2 * d2 * n72 * n72 +
                 (d2 * bsq(g, px, Pd) + bsq(g, py, Pd)) / d +
                 d * (d2 * bsq(g, ptx, Pm1) + bsq(g, pty, Pm1));

  // D_m with D_d f = {d f_x, f_y}, D_d^2 f = {d^2 f_xx, d f_xy, f_yy}.
  const BulkField dv = d * s.v;
  double Dm = 0.0;
  {
    const double ne = surface_norm(s.eta, Multiplier::delta_weight(2.0, d), md);
    Dm += ne * ne;
    for (const BulkField* f : {&s.u, &dv}) {
      const BulkField fx = dxk(g, *f, 1), fy = dy(g, *f);
      Dm += bsq(g, *f, P);
      Dm += d2 * bsq(g, fx, P) + bsq(g, fy, P);
      Dm += d2 * d2 * bsq(g, dxk(g, *f, 2), P) + d2 * bsq(g, dy(g, fx), P) + bsq(g, dy(g, *f, 2), P);
    }
    const double nx1 =
        surface_norm(sdx(s.eta, 1), Multiplier::delta_weight(1.0, d), md + 1.0);
    Dm += c.W2 * c.W2 * nx1 * nx1;
    Dm += c.W2 * d2 * bsq(g, dy(g, dxk(g, s.v, 1)), P);
  }
  rep.Dm = Dm;

  // Itemised list equivalent to Em, plus the two extra velocity terms.
  {
    auto sm = [&](const SurfaceField& f) {
      const double n = surface_norm(f, md);
      return n * n;
    };
    auto bp = [&](const BulkField& f) { return bsq(g, f, P); };
    const SurfaceField ex = sdx(s.eta, 1), exx = sdx(s.eta, 2), exxx = sdx(s.eta, 3);
    const SurfaceField etx = sdx(c.eta_t, 1);
    const BulkField ux = dxk(g, s.u, 1), vx = dxk(g, s.v, 1);
    double S = sm(s.eta);
    S += d2 * (sm(ex) + sm(c.eta_t) + bp(s.v) + bp(ux) + bp(c.u_t));
    S += d2 * d2 * (sm(exx) + sm(etx) + bp(vx) + bp(dxk(g, s.u, 2)) + bp(c.v_t));
    S += d2 * d2 * d2 * bp(dxk(g, s.v, 2));
    S += c.W2 * (sm(ex) + d2 * (sm(exx) + sm(etx)) + d2 * d2 * sm(exxx));
    rep.Em_tilde_surrogate = S + bp(s.u) + bp(uy);
  }
  rep.audit_ratio = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

// ---- audits -----------------------------------------------------------------

double korn_ratio(const Grid& g, const BulkField& u, const BulkField& v, double delta) {
  const double d2 = delta * delta;
  const BulkField ux = dxk(g, u, 1), uy = dy(g, u), vx = dxk(g, v, 1), vy = dy(g, v);
  const double scale = std::max({1.0, max_abs(u), max_abs(v)});
  const double div = max_abs(ux + vy);
  double wall = 0.0;
  for (double x : u.bottom()) wall = std::max(wall, std::abs(x));
  for (double x : v.bottom()) wall = std::max(wall, std::abs(x));
  if (div > 1e-8 * scale || wall > 1e-8 * scale) {
    std::ostringstream os;
    os << "korn_ratio: test field violates constraints (div " << div << ", wall " << wall << ")";
    throw DomainError(os.str());
  }
  const double lhs = d2 * bsq(g, ux) + bsq(g, uy) + d2 * d2 * bsq(g, vx) + d2 * bsq(g, vy);
  const BulkField shear = uy + d2 * vx;
  const double rhs = 2.0 * d2 * bsq(g, ux) + bsq(g, shear) + 2.0 * d2 * bsq(g, vy);
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double trace_ratio(const Grid& g, const BulkField& f, double delta) {
  const SurfaceField tr = g.fft(f.top());
  const double t0 = surface_norm(tr, 0.0), th = surface_norm_homogeneous(tr, 0.5);
  const double num = t0 * t0 + delta * th * th;
  const double den = bsq(g, f) + delta * delta * bsq(g, dxk(g, f, 1)) + bsq(g, dy(g, f));
  return num / den;
}

namespace {

// Random smooth field sum_{n<=band, q<=deg} c y^q trig(2 pi n x), amplitudes
// decaying with n and q so the spectrum stays resolved.
BulkField random_field(const Grid& g, const AuditOptions& o, std::mt19937_64& rng, int y_shift) {
  std::normal_distribution<double> N01(0.0, 1.0);
  BulkField f = g.zeros();
  const auto& x = g.x();
  const auto& y = g.y();
  constexpr double tp = 2.0 * 3.14159265358979323846;
  for (int n = 0; n <= o.band; ++n) {
    for (int q = 0; q <= o.ydeg; ++q) {
      const double a = N01(rng) / ((1.0 + n) * (1.0 + q)), b = N01(rng) / ((1.0 + n) * (1.0 + q));
      for (int i = 0; i < g.nx(); ++i) {
        const double tx = a * std::cos(tp * n * x[i]) + b * std::sin(tp * n * x[i]);
        for (int j = 0; j < g.ny(); ++j)
          f(i, j) += tx * std::pow(y[j], q + y_shift);
      }
    }
  }
  return f;
}

// Single x-mode n in [0, band] with a boundary-layer profile
// cosh(mu y)/cosh(mu), mu log-uniform in [0.1, 2 pi band + 10], plus a
// small random polynomial. The cosh family holds the mode-wise extremals of
// the trace quotient, so the maxima probe the actual supremum.
BulkField trace_field(const Grid& g, const AuditOptions& o, std::mt19937_64& rng) {
  std::normal_distribution<double> N01(0.0, 1.0);
  std::uniform_int_distribution<int> mode(0, o.band);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  constexpr double tp = 2.0 * 3.14159265358979323846;
  const int n = mode(rng);
  const double phase = tp * U(rng);
  const double mu = 0.1 * std::pow((tp * o.band + 10.0) / 0.1, U(rng));
  std::vector<double> c(o.ydeg + 1);
  for (double& cq : c) cq = 0.1 * N01(rng);
  BulkField f = g.zeros();
  const auto& x = g.x();
  const auto& y = g.y();
  for (int j = 0; j < g.ny(); ++j) {
    double prof = std::exp(mu * (y[j] - 1.0)) * (1.0 + std::exp(-2.0 * mu * y[j])) / (1.0 + std::exp(-2.0 * mu));
    double poly = 0.0;
    for (int q = o.ydeg; q >= 0; --q) poly = poly * y[j] + c[q];
    prof += poly;
    for (int i = 0; i < g.nx(); ++i) f(i, j) = prof * std::cos(tp * n * x[i] + phase);
  }
  return f;
}

}  // namespace

std::vector<AuditRow> korn_audit(const AuditOptions& o) {
  const Grid g(o.nx, o.ny);
  std::vector<AuditRow> out;
  for (double d : o.deltas) {
    std::mt19937_64 rng(o.seed);
    AuditRow row{d, 0.0};
    for (int t = 0; t < o.trials; ++t) {
      const BulkField psi = random_field(g, o, rng, 2);
      const BulkField u = dy(g, psi), v = -dxk(g, psi, 1);
      row.worst = std::max(row.worst, korn_ratio(g, u, v, d));
    }
    out.push_back(row);
  }
  return out;
}

std::vector<AuditRow> trace_audit(const AuditOptions& o) {
  const Grid g(o.nx, o.ny);
  std::vector<AuditRow> out;
  for (double d : o.deltas) {
    std::mt19937_64 rng(o.seed);
    AuditRow row{d, 0.0};
    for (int t = 0; t < o.trials; ++t)
      row.worst = std::max(row.worst, trace_ratio(g, trace_field(g, o, rng), d));
    out.push_back(row);
  }
  return out;
}

double trace_supremum(double delta, int nmax) {
  double best = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    const double sk = 2.0 * 3.14159265358979323846 * n * delta, l = std::sqrt(1.0 + sk * sk);
    best = std::max(best, (1.0 + sk) / (l * std::tanh(l)));
  }
  return best;
}

EnergyAudit energy_audit(const std::vector<EnergySample>& s) {
  if (s.size() < 2) throw ParameterError("energy_audit: need at least two samples");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].t > s[i - 1].t)) throw ParameterError("energy_audit: times must increase");
  EnergyAudit a;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == n ? n - 1 : i + 1;
    const double dEdt = (s[hi].E - s[lo].E) / (s[hi].t - s[lo].t);
    EnergyAuditRow r{s[i].t, dEdt + s[i].F, s[i].N, 0.0};
    if (r.N > 0.0) r.implied_C = r.dEdt_plus_F / r.N;
    else if (r.dEdt_plus_F > 0.0) r.implied_C = std::numeric_limits<double>::infinity();
    a.max_C = std::max(a.max_C, r.implied_C);
    a.rows.push_back(r);
    if (s[i].F > 0.0 && i + 1 < n && s[i + 1].t - s[i].t > s[i].E / s[i].F) a.cadence_warning = true;
  }
  std::size_t diss = 0, bounded = 0;
  for (const EnergyAuditRow& r : a.rows) {
    // Relative slack for the rounding in the difference quotient.
    const double slack = 1e-12 * (std::abs(r.dEdt_plus_F) + a.max_C * r.N);
    if (r.dEdt_plus_F <= slack) ++diss;
    if (r.dEdt_plus_F <= a.max_C * r.N + slack) ++bounded;
  }
  a.fraction_dissipative = static_cast<double>(diss) / static_cast<double>(n);
  a.fraction_bounded = static_cast<double>(bounded) / static_cast<double>(n);
  if (a.cadence_warning)
    a.warning = "sample spacing exceeds the dissipation time E/F; dE/dt is under-resolved";
  return a;
}

std::vector<EnergySample> energy_series(const std::vector<EnergyReport>& reports,
                                        const std::vector<double>& times) {
  if (reports.size() != times.size())
    throw ParameterError("energy_series: reports and times differ in length");
  std::vector<EnergySample> out;
  for (std::size_t i = 0; i < reports.size(); ++i)
    out.push_back({times[i], reports[i].Em, reports[i].Fm, reports[i].Nm});
  return out;
}

}  // namespace filmcascade

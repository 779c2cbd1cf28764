#include "filmcascade/transform.hpp"

#include <cmath>
#include <sstream>

namespace filmcascade {

namespace {

constexpr double kGuard = 1e-8;

struct Ops {
  const Grid& g;
  BulkField dx(const BulkField& f, int k = 1) const { return differentiate(g, f, Axis::X, k); }
  BulkField dy(const BulkField& f, int k = 1) const { return differentiate(g, f, Axis::Y, k); }
  std::vector<double> sx(const std::vector<double>& f, int k = 1) const {
    return differentiate(g, f, k);
  }
};

BulkField reciprocal(const BulkField& a, const char* what) {
  BulkField out(a.nx, a.ny);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (!(std::abs(a.data[i]) > kGuard)) {
      std::ostringstream os;
      os << what << ": denominator " << a.data[i] << " below guard";
      throw GeometryError(os.str());
    }
    out.data[i] = 1.0 / a.data[i];
  }
  return out;
}

}  // namespace

NSState zero_state(const Grid& g, const ScalingParams& p) {
  NSState s;
  s.eta = SurfaceField(g.nx());
  s.u = g.zeros();
  s.v = g.zeros();
  s.p = g.zeros();
  s.params = p;
  return s;
}

NSState advance_along(const NSState& s, const NSRates& r, double h) {
  NSState o = s;
  for (std::size_t n = 0; n < o.eta.coef.size(); ++n) o.eta.coef[n] += h * r.eta_t.coef[n];
  kernels::axpy(h, r.u_t.data.data(), o.u.data.data(), o.u.data.size());
  kernels::axpy(h, r.v_t.data.data(), o.v.data.data(), o.v.data.size());
  if (r.has_p_t) kernels::axpy(h, r.p_t.data.data(), o.p.data.data(), o.p.data.size());
  return o;
}

BulkField nusselt_field(const Grid& g) {
  return y_profile(g, [](double y) { return 2.0 * y - y * y; });
}

BulkField nusselt_slope_field(const Grid& g) {
  return y_profile(g, [](double y) { return 2.0 - 2.0 * y; });
}

TransformAssembly build_transform(const Grid& g, const SurfaceField& eta,
                                  const ScalingParams& p) {
  const double eps = p.epsilon, delta = p.delta;
  TransformAssembly t;
  t.params = p;
  t.ext = extend_surface(g, eta, delta);
  const BulkField Y = y_profile(g, [](double y) { return y; });
  const BulkField E = eps * t.ext.field(g, 0, 0);
  const BulkField Ex = eps * t.ext.field(g, 1, 0);
  const BulkField Ey = eps * t.ext.field(g, 0, 1);

  t.J = 1.0 + fma(Y, Ey, E);
  for (double v : t.J.data)
    if (!(v > kGuard)) {
      std::ostringstream os;
      os << "build_transform: Jacobian " << v << " is not positive (surface touches the wall)";
      throw GeometryError(os.str());
    }
  const BulkField invJ = reciprocal(t.J, "build_transform");
  t.a1 = (-delta) * (Y * Ex * invJ);
  t.b1 = invJ - y_profile(g, [](double) { return 1.0; });
  t.b2 = fma(t.a1, t.a1, fma(t.b1, t.b1, 2.0 * t.b1));
  const BulkField YE = Y * E;
  t.V1 = 2.0 * YE - 2.0 * (Y * YE) - YE * YE;

  const BulkField zero = g.zeros();
  const BulkField one = y_profile(g, [](double) { return 1.0; });
  const MatField I = identity_field(g);
  t.A1 = {one + t.b1, zero, -t.a1, one};
  t.A2 = {one, t.a1, zero, one + t.b1};
  t.A3 = {t.b2, zero, zero, zero};
  const BulkField Ja1 = t.J * t.a1;
  t.A4 = {t.J - one, Ja1, Ja1, fma(t.a1, Ja1, t.b1)};
  t.A6 = I + t.A4;
  t.N = {t.J - one, zero, Ja1, zero};
  t.N1 = t.A1 - I;
  t.N2 = t.A2 - I;
  t.N6 = t.A4;

  // A5 = A4 (I + A4)^{-1}, pointwise 2x2 inverse.
  const BulkField det = t.A6.xx * t.A6.yy - t.A6.xy * t.A6.yx;
  const BulkField idet = reciprocal(det, "build_transform (I+A4)");
  const MatField inv{t.A6.yy * idet, -(t.A6.xy * idet), -(t.A6.yx * idet), t.A6.xx * idet};
  t.A5 = t.A4 * inv;
  t.a5_asymmetry = max_abs(t.A5.xy - t.A5.yx);
  return t;
}

SurfaceField kinematic_rate(const Grid& g, const NSState& s) {
  const double eps = s.params.epsilon;
  // h3 = eps^2 eta^2 eta_x is formed as d_x(eps^2 eta^3 / 3) so that the
  // discrete mean of eta_t vanishes exactly.
  std::vector<double> e = g.ifft(s.eta);
  for (double& v : e) v = eps * eps * v * v * v / 3.0;
  SurfaceField h3 = differentiate(dealias(g.fft(e)), 1);
  const SurfaceField vt = g.fft(s.v.top());
  SurfaceField out(g.nx());
  for (int n = 0; n < g.nmodes(); ++n) {
    const cplx ik(0.0, 2.0 * std::numbers::pi * n);
    out.coef[n] = vt.coef[n] - ik * s.eta.coef[n] + h3.coef[n];
  }
  out.coef[0] = 0.0;
  out.coef[g.nmodes() - 1] = 0.0;
  return out;
}

BoundaryTerms assemble_boundary_terms(const Grid& g, const NSState& s,
                                      const TransformAssembly& tr) {
  const Ops D{g};
  const ScalingParams& p = s.params;
  const double eps = p.epsilon, delta = p.delta, d2 = delta * delta;
  const int nx = g.nx();
  const auto top = [](const BulkField& f) { return f.top(); };

  const std::vector<double> eta = g.ifft(s.eta);
  const std::vector<double> eta_x = g.ifft(differentiate(s.eta, 1));
  const std::vector<double> eta_xx = g.ifft(differentiate(s.eta, 2));

  const BulkField& u = s.u;
  const BulkField& v = s.v;
  const auto ux = top(D.dx(u)), uy = top(D.dy(u));
  const auto vx = top(D.dx(v)), vy = top(D.dy(v));
  const auto ut = top(u), vt = top(v);
  const auto a1 = top(tr.a1), b1 = top(tr.b1);
  const auto a1y = top(D.dy(tr.a1));

  // Pieces of the symmetric-gradient correction.
  const BulkField b1u = tr.b1 * u, a1u = tr.a1 * u;
  const BulkField g1 = (1.0 + tr.b1) * u;
  const BulkField g2 = delta * v - a1u;
  const auto b1u_x = top(D.dx(b1u)), a1u_x = top(D.dx(a1u));
  const auto b1u_y = top(D.dy(b1u)), a1u_y = top(D.dy(a1u));
  const auto g1_y = top(D.dy(g1)), g2_y = top(D.dy(g2));

  BoundaryTerms bt;
  for (auto* vec : {&bt.h1, &bt.h2, &bt.h21, &bt.h22, &bt.h3, &bt.h4, &bt.h5, &bt.b3, &bt.b4,
                    &bt.h_dot_t, &bt.h_dot_n})
    vec->assign(nx, 0.0);

  // h3 in derivative form (see kinematic_rate).
  {
    std::vector<double> e3(nx);
    for (int i = 0; i < nx; ++i) e3[i] = eps * eps * eta[i] * eta[i] * eta[i] / 3.0;
    bt.h3 = g.ifft(differentiate(dealias(g.fft(e3)), 1));
  }

  const double inv_sin = 1.0 / std::sin(p.alpha);
  for (int i = 0; i < nx; ++i) {
    const double sl = eps * delta * eta_x[i];  // slope s = eps delta eta_x
    const double nx_ = -sl, ny_ = 1.0;         // n = (-s, 1)
    const double tx_ = 1.0, ty_ = sl;          // t = (1, s)
    const double tan_stress = d2 * vx[i] + uy[i] - 2.0 * eta[i];

    // X = grad_d (N1 u)^T, Y = N2 grad_d (A1 u)^T; rows index the derivative.
    const double X[2][2] = {{delta * b1u_x[i], -delta * a1u_x[i]}, {b1u_y[i], -a1u_y[i]}};
    const double Yv[2][2] = {{a1[i] * g1_y[i], a1[i] * g2_y[i]}, {b1[i] * g1_y[i], b1[i] * g2_y[i]}};
    double S[2][2];
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) S[r][c] = 0.5 * (X[r][c] + X[c][r] + Yv[r][c] + Yv[c][r]);
    const double hx = -eps * d2 * eta_x[i] * ux[i] + S[0][0] * nx_ + S[0][1] * ny_;
    const double hy = -0.5 * sl * tan_stress + S[1][0] * nx_ + S[1][1] * ny_;
    bt.h_dot_t[i] = hx * tx_ + hy * ty_;
    bt.h_dot_n[i] = hx * nx_ + hy * ny_;

    // b4 and h5 as closed forms.
    const double m11 = a1[i] * (1.0 + b1[i]);
    const double m12 = 0.5 * (-a1[i] * a1[i] + b1[i] * (2.0 + b1[i]));
    const double Mn_x = m11 * nx_ + m12 * ny_, Mn_y = m12 * nx_ - m11 * ny_;
    bt.b4[i] = -0.5 * sl * sl + Mn_x * tx_ + Mn_y * ty_;

    const double p11 = delta * b1u_x[i];
    const double p12 = 0.5 * (-delta * a1u_x[i] - a1[i] * a1y[i] * ut[i] + delta * a1[i] * vy[i]);
    const double p22 = -a1y[i] * (1.0 + b1[i]) * ut[i] + delta * b1[i] * vy[i];
    const double Pn_x = p11 * nx_ + p12 * ny_, Pn_y = p12 * nx_ + p22 * ny_;
    bt.h5[i] = -eps * d2 * eta_x[i] * ux[i] - 0.5 * sl * sl * (d2 * vx[i] - 2.0 * eta[i]) +
               Pn_x * tx_ + Pn_y * ty_;

    bt.h4[i] = -2.0 * (eps * d2 * eta_x[i] * vy[i] + bt.h_dot_t[i]);
    const double den = 1.0 + 2.0 * bt.b4[i];
    if (!(std::abs(den) > kGuard)) throw GeometryError("assemble_boundary_terms: 1 + 2 b4 vanishes");
    bt.b3[i] = -4.0 * bt.b4[i] / den;
    bt.h1[i] = 2.0 * bt.b4[i] / den * d2 * vx[i] - 2.0 / den * (eps * d2 * eta_x[i] * vy[i] + bt.h5[i]);

    const double s2 = sl * sl;
    bt.h21[i] = -s2 / (1.0 + s2) * delta * vy[i] +
                (-0.5 * sl * tan_stress + bt.h_dot_n[i]) / (1.0 + s2);
    bt.h22[i] = inv_sin * (-std::expm1(-1.5 * std::log1p(s2))) * eta_xx[i];
    bt.h2[i] = bt.h21[i] + p.surface_tension() * bt.h22[i];
  }
  return bt;
}

namespace {

struct ForcingParts {
  VecField f, f1, f2, f3;
};

ForcingParts forcing_parts(const Grid& g, const NSState& s, const TransformAssembly& tr) {
  const Ops D{g};
  const ScalingParams& p = s.params;
  const double eps = p.epsilon, delta = p.delta, d2 = delta * delta, R = p.reynolds;
  ForcingParts out;
  if (eps == 0.0) {
    out.f = out.f1 = out.f2 = out.f3 = {g.zeros(), g.zeros()};
    return out;
  }

  const BulkField Y = y_profile(g, [](double y) { return y; });
  const BulkField one = y_profile(g, [](double) { return 1.0; });
  const BulkField ub = nusselt_field(g), uby = nusselt_slope_field(g);
  const BulkField& u = s.u;
  const BulkField& v = s.v;
  const BulkField ux = D.dx(u), uy = D.dy(u);
  const BulkField& a1 = tr.a1;
  const BulkField& b1 = tr.b1;
  const BulkField invJ = 1.0 + b1;

  // Geometry rates from the kinematic condition, lifted by the extension.
  const ExtendedSurface et = extend_surface(g, kinematic_rate(g, s), delta);
  const BulkField Et = eps * et.field(g, 0, 0);
  const BulkField Ext = eps * et.field(g, 1, 0);
  const BulkField Eyt = eps * et.field(g, 0, 1);
  const BulkField Ex = eps * tr.ext.field(g, 1, 0);
  const BulkField Jt = fma(Y, Eyt, Et);
  const BulkField b1t = -(Jt * invJ * invJ);
  const BulkField a1t = (-delta) * (Y * (Ext * invJ - Ex * Jt * invJ * invJ));
  const BulkField ct = delta * (Y * Et * invJ);

  // A1 u = ((1+b1) u, -a1 u + delta v).
  const BulkField g1 = invJ * u;
  const BulkField g2 = delta * v - a1 * u;
  const BulkField g1x = D.dx(g1), g1y = D.dy(g1), g2x = D.dx(g2), g2y = D.dy(g2);

  // f1: moving-geometry time derivative.
  out.f1 = {delta * (b1t * u) - ct * g1y, (-delta) * (a1t * u) - ct * g2y};

  // f2: advection corrections, with W = V + eps A1 u.
  const BulkField b1u = b1 * u, a1u = a1 * u;
  const BulkField W1 = tr.V1 + eps * g1;
  const BulkField W2 = eps * g2;
  const BulkField Wy = fma(W1, a1, W2 * invJ);  // coefficient of d_y
  out.f2.x = delta * (ub * D.dx(b1u)) + ub * a1 * g1y + delta * (W1 * g1x) + Wy * g1y +
             fma(a1u, uby, delta * (v * b1 * uby)) - a1u * uby +
             delta * (invJ * fma(u, D.dx(tr.V1), v * D.dy(tr.V1)));
  out.f2.y = (-delta) * (ub * D.dx(a1u)) + ub * a1 * g2y + delta * (W1 * g2x) + Wy * g2y;

  // f3: viscous commutators [d^2, A1] and the P_delta operator.
  const BulkField b1x = D.dx(b1), b1y = D.dy(b1);
  const BulkField a1x = D.dx(a1), a1y = D.dy(a1);
  const BulkField onepb2 = 1.0 + tr.b2;
  const BulkField pcoef = delta * a1x + a1 * a1y + invJ * b1y;
  out.f3.x = d2 * fma(D.dx(b1, 2), u, 2.0 * (b1x * ux)) +
             onepb2 * fma(D.dy(b1, 2), u, 2.0 * (b1y * uy)) +
             2.0 * delta * (a1 * D.dx(g1y)) + pcoef * g1y;
  out.f3.y = (-d2) * fma(D.dx(a1, 2), u, 2.0 * (a1x * ux)) -
             onepb2 * fma(D.dy(a1, 2), u, 2.0 * (a1y * uy)) +
             2.0 * delta * (a1 * D.dx(g2y)) + pcoef * g2y + delta * (tr.b2 * D.dy(v, 2));

  // N w0 with w0 = (U.grad)u + (u.grad)U; only w0_x enters since N has a
  // zero second column.
  const BulkField w0x = delta * fma(ub, ux, v * uby);
  const BulkField Jm1 = tr.J - one;
  const VecField rhs = (1.0 / R) * out.f3 - out.f1 - out.f2;
  const BulkField Ja1 = tr.J * a1;
  out.f.x = dealias(g, tr.J * rhs.x - Jm1 * w0x);
  out.f.y = dealias(g, Ja1 * rhs.x + rhs.y - Ja1 * w0x);
  return out;
}

}  // namespace

VecField assemble_forcing(const Grid& g, const NSState& s, const TransformAssembly& tr) {
  return forcing_parts(g, s, tr).f;
}

namespace {

// Instantaneous pieces whose time derivatives F2 and G_k need.
struct TimePieces {
  VecField f, F3, A5F3, b2uyy;
  MatField A4, A5;
};

TimePieces time_pieces(const Grid& g, const NSState& s) {
  const Ops D{g};
  const double delta = s.params.delta, d2 = delta * delta, R = s.params.reynolds;
  const TransformAssembly tr = build_transform(g, s.eta, s.params);
  TimePieces tp;
  tp.f = assemble_forcing(g, s, tr);
  const BulkField ub = nusselt_field(g), uby = nusselt_slope_field(g);
  const BulkField ux = D.dx(s.u), uyy = D.dy(s.u, 2), uxx = D.dx(s.u, 2);
  const BulkField vx = D.dx(s.v), vxx = D.dx(s.v, 2), vyy = D.dy(s.v, 2);
  tp.F3.x = tp.f.x - delta * fma(ub, ux, s.v * uby) + (1.0 / R) * (d2 * uxx + (1.0 + tr.b2) * uyy);
  tp.F3.y = tp.f.y - d2 * (ub * vx) + (1.0 / R) * (d2 * delta * vxx + delta * vyy);
  tp.A5F3 = tr.A5.apply(tp.F3);
  tp.b2uyy = {tr.b2 * uyy, g.zeros()};
  tp.A4 = tr.A4;
  tp.A5 = tr.A5;
  return tp;
}

VecField vdiff(const VecField& a, const VecField& b, double inv2h) {
  return inv2h * (a - b);
}

MatField mdiff(const MatField& a, const MatField& b, double inv2h) {
  const MatField d = a - b;
  return {inv2h * d.xx, inv2h * d.xy, inv2h * d.yx, inv2h * d.yy};
}

VecField dxk(const Grid& g, const VecField& w, int k) {
  return {differentiate(g, w.x, Axis::X, k), differentiate(g, w.y, Axis::X, k)};
}

// [d_x^k, A] w = d_x^k (A w) - A d_x^k w
VecField commutator(const Grid& g, const MatField& A, const VecField& w, int k) {
  return dxk(g, A.apply(w), k) - A.apply(dxk(g, w, k));
}

}  // namespace

BulkTerms assemble_bulk_terms(const Grid& g, const NSState& s, const NSRates* rates,
                              const BulkTermOptions& opts) {
  const Ops D{g};
  const ScalingParams& p = s.params;
  const double delta = p.delta, d2 = delta * delta, R = p.reynolds;
  const TransformAssembly tr = build_transform(g, s.eta, p);
  const BulkField ub = nusselt_field(g), uby = nusselt_slope_field(g);

  BulkTerms bt;
  {
    ForcingParts fp = forcing_parts(g, s, tr);
    bt.f = std::move(fp.f);
    bt.f1 = std::move(fp.f1);
    bt.f2 = std::move(fp.f2);
    bt.f3 = std::move(fp.f3);
  }

  const VecField gradp{delta * D.dx(s.p), D.dy(s.p)};
  const VecField A4gp = tr.A4.apply(gradp);
  const BulkField uyy = D.dy(s.u, 2);
  bt.F1 = bt.f - (2.0 / R) * A4gp;
  bt.F1.x += (1.0 / R) * (tr.b2 * uyy);
  const TimePieces tp = time_pieces(g, s);
  bt.F3 = tp.F3;
  bt.sf1 = bt.f.y - (2.0 / R) * A4gp.y;
  bt.sf3 = bt.f.x - (2.0 / R) * A4gp.x;

  if (rates) {
    const BulkField ux = D.dx(s.u), uxx = D.dx(s.u, 2), px = D.dx(s.p);
    const BulkField onepb2 = 1.0 + tr.b2;
    const BulkField inv = reciprocal(onepb2, "assemble_bulk_terms (1+b2)");
    const BulkField mom = delta * rates->u_t + delta * (ub * ux) + delta * (uby * s.v) -
                          (d2 / R) * uxx;
    bt.sf2 = -(tr.b2 * inv * mom) - (2.0 * delta / R) * (tr.b2 * inv * px) - inv * bt.sf3;
  } else {
    bt.sf2 = g.zeros();
  }

  if (opts.time_terms) {
    if (!rates || !rates->has_p_t)
      throw ContractError("assemble_bulk_terms: F2 and G_k need u_t, v_t and p_t");
    const double h = opts.jvp_step;
    const TimePieces plus = time_pieces(g, advance_along(s, *rates, h));
    const TimePieces minus = time_pieces(g, advance_along(s, *rates, -h));
    const double inv2h = 0.5 / h;
    const VecField f_t = vdiff(plus.f, minus.f, inv2h);
    const VecField b2uyy_t = vdiff(plus.b2uyy, minus.b2uyy, inv2h);
    const VecField A5F3_t = vdiff(plus.A5F3, minus.A5F3, inv2h);
    const VecField F3_t = vdiff(plus.F3, minus.F3, inv2h);
    const MatField A4_t = mdiff(plus.A4, minus.A4, inv2h);
    const MatField A5_t = mdiff(plus.A5, minus.A5, inv2h);
    const VecField udt{rates->u_t, delta * rates->v_t};

    bt.F2 = f_t + (1.0 / R) * b2uyy_t + (0.5 * delta) * A5_t.apply(udt) - A5F3_t;
    const VecField gradpt{delta * D.dx(rates->p_t), D.dy(rates->p_t)};
    const VecField arg = (-2.0 / R) * tr.A6.apply(gradpt) - (2.0 / R) * A4_t.apply(gradp) + F3_t;
    for (int k = 1; k <= opts.kmax; ++k)
      bt.G[k] = commutator(g, tr.A5, arg, k) + (0.5 * delta) * commutator(g, A5_t, udt, k);
    bt.has_time_terms = true;
  }
  return bt;
}

}  // namespace filmcascade

#include "filmcascade/pressure.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

namespace filmcascade {

struct DeltaPoisson::Impl {
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
};

DeltaPoisson::DeltaPoisson(const Grid& g, double delta)
    : g_(&g), delta_(delta), impl_(std::make_unique<Impl>()) {
  const int ny = g.ny();
  const Eigen::MatrixXd& d1 = g.dy_matrix(1);
  const Eigen::MatrixXd& d2 = g.dy_matrix(2);
  impl_->lu.reserve(g.nmodes());
  for (int n = 0; n < g.nmodes(); ++n) {
    const double k = 2.0 * std::numbers::pi * n;
    Eigen::MatrixXd a = d2;
    a.diagonal().array() -= delta * delta * k * k;
    a.row(0) = d1.row(0);                 // Neumann at the wall
    a.row(ny - 1).setZero();              // Dirichlet at the surface
    a(ny - 1, ny - 1) = 1.0;
    impl_->lu.emplace_back(a);
  }
}

DeltaPoisson::~DeltaPoisson() = default;
DeltaPoisson::DeltaPoisson(DeltaPoisson&&) noexcept = default;
DeltaPoisson& DeltaPoisson::operator=(DeltaPoisson&&) noexcept = default;

BulkField DeltaPoisson::solve(const BulkField& rhs, const std::vector<double>& top) const {
  const Grid& g = *g_;
  const int ny = g.ny();
  BulkSpectrum r = g.fft(rhs);
  const SurfaceField t = g.fft(top);
  BulkSpectrum q(g.nx(), ny);
  Eigen::MatrixXd b(ny, 2);
  for (int n = 0; n < g.nmodes(); ++n) {
    for (int j = 0; j < ny; ++j) {
      b(j, 0) = r(n, j).real();
      b(j, 1) = r(n, j).imag();
    }
    b(0, 0) = b(0, 1) = 0.0;
    b(ny - 1, 0) = t.coef[n].real();
    b(ny - 1, 1) = t.coef[n].imag();
    const Eigen::MatrixXd x = impl_->lu[n].solve(b);
    for (int j = 0; j < ny; ++j) q(n, j) = cplx(x(j, 0), x(j, 1));
  }
  return g.ifft(q);
}

PressureData pressure_data(const Grid& grid, const NSState& s, const TransformAssembly& tr,
                           const BoundaryTerms& bt) {
  const ScalingParams& p = s.params;
  const double eps = p.epsilon, delta = p.delta, R = p.reynolds;
  auto dx = [&](const BulkField& f) { return differentiate(grid, f, Axis::X, 1); };
  auto dy = [&](const BulkField& f) { return differentiate(grid, f, Axis::Y, 1); };
  const BulkField& u = s.u;
  const BulkField& v = s.v;
  const BulkField& a1 = tr.a1;
  const BulkField invJ = 1.0 + tr.b1;
  const BulkField invJ_y = dy(invJ);
  const BulkField a1y = dy(a1);
  const BulkField vy = dy(v);
  const BulkField uy = dy(u);
  const BulkField Y = y_profile(grid, [](double y) { return y; });
  const BulkField E = eps * tr.ext.field(grid, 0, 0);

  // F1 = [[a1/J, -a1^2], [1/J^2, -a1/J]];  F2 = eps F2h + [[0, 0], [c, 0]].
  const MatField F1{a1 * invJ, -(a1 * a1), invJ * invJ, -(a1 * invJ)};
  MatField F2h;
  F2h.xx = delta * dx(invJ * u) + a1 * invJ_y * u;
  F2h.xy = delta * dx(delta * v - a1 * u) - a1 * a1y * u + delta * (a1 * vy);
  F2h.yx = invJ * invJ_y * u;
  F2h.yy = delta * (invJ * vy) - invJ * a1y * u;
  // c = J^{-1} U'_y = 2 - 2 y (1 + eps eta~)
  const BulkField c = 2.0 * (y_profile(grid, [](double) { return 1.0; }) - Y * (1.0 + E));
  const MatField F2{eps * F2h.xx, eps * F2h.xy, c + eps * F2h.yx, eps * F2h.yy};
  const BulkField trF1F2 = F1.xx * F2.xx + F1.xy * F2.yx + F1.yx * F2.xy + F1.yy * F2.yy;
  const BulkField trF2h2 = F2h.xx * F2h.xx + 2.0 * (F2h.xy * F2h.yx) + F2h.yy * F2h.yy;

  PressureData d;
  d.delta = delta;
  d.g = (-0.5 * R) * (tr.J * (2.0 * (trF1F2 * uy) + eps * trF2h2 + 2.0 * (F2h.xy * c)));
  d.g = dealias(grid, d.g);
  d.g0 = 0.5 * (delta * dx(invJ * u) + invJ * a1y * u);
  const std::vector<double> ux = dx(u).top();
  const std::vector<double> eta = grid.ifft(s.eta);
  const std::vector<double> eta_xx = grid.ifft(differentiate(s.eta, 2));
  const double it = p.inv_tan_alpha();
  const double sw = p.surface_tension() / std::sin(p.alpha);
  d.phi.resize(grid.nx());
  for (int i = 0; i < grid.nx(); ++i)
    d.phi[i] = -delta * ux[i] + it * eta[i] - sw * eta_xx[i] + bt.h2[i];
  d.n6 = tr.N6;
  return d;
}

BulkField solve_pressure(const Grid& grid, const PressureData& data, const PressureOptions& opts,
                         PressureInfo* info) {
  const double delta = data.delta;
  const DeltaPoisson solver(grid, delta);
  auto dx = [&](const BulkField& f) { return differentiate(grid, f, Axis::X, 1); };
  auto dy = [&](const BulkField& f) { return differentiate(grid, f, Axis::Y, 1); };
  const BulkField g0x = dx(data.g0), g0y = dy(data.g0);
  const std::vector<double> g0top = data.g0.top();
  std::vector<double> qtop(grid.nx());
  for (int i = 0; i < grid.nx(); ++i) qtop[i] = data.phi[i] + g0top[i];

  BulkField p = grid.zeros();
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iter; ++it) {
    const VecField gp{delta * dx(p), dy(p)};
    const VecField n6gp = data.n6.apply(gp);
    const BulkField flux_x = delta * g0x - n6gp.x;
    const BulkField flux_y = g0y - n6gp.y;
    const BulkField rhs = data.g + delta * dx(flux_x) + dy(flux_y);
    const BulkField q = solver.solve(rhs, qtop);
    BulkField pn = q - data.g0;
    const double upd = max_abs(pn - p);
    p = std::move(pn);
    if (info) {
      info->iterations = it;
      info->last_update = upd;
    }
    if (!std::isfinite(upd)) throw PressureSolverError("solve_pressure: non-finite iterate");
    if (upd < opts.tol * std::max(1.0, max_abs(p))) return p;
    // A growing update past the first iterations means the data lie
    // outside the small-data regime where the map contracts.
    if (it > 3 && upd > prev) {
      std::ostringstream os;
      os << "solve_pressure: fixed point not contracting (update " << upd << " after " << it
         << " iterations)";
      throw PressureSolverError(os.str());
    }
    prev = upd;
  }
  std::ostringstream os;
  os << "solve_pressure: no convergence in " << opts.max_iter << " iterations";
  throw PressureSolverError(os.str());
}

BulkField pressure_of_state(const Grid& grid, const NSState& s, const PressureOptions& opts) {
  const TransformAssembly tr = build_transform(grid, s.eta, s.params);
  const BoundaryTerms bt = assemble_boundary_terms(grid, s, tr);
  return solve_pressure(grid, pressure_data(grid, s, tr, bt), opts);
}

}  // namespace filmcascade

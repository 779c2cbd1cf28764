#include "filmcascade/modeop.hpp"

#include <cmath>

namespace filmcascade {

ModeOperator mode_operator(const Grid& g, const ScalingParams& p, double k, double sigma) {
  const int ny = g.ny();
  const double d = p.delta, d2 = d * d, R = p.reynolds;
  const cplx ik(0.0, k);
  const Eigen::MatrixXd& D1 = g.dy_matrix(1);
  const Eigen::MatrixXd& D2 = g.dy_matrix(2);
  ModeOperator op;
  op.ny = ny;
  const int n = op.size();
  op.M = Eigen::MatrixXcd::Zero(n, n);
  op.L = Eigen::MatrixXcd::Zero(n, n);
  op.algebraic.assign(n, false);
  const int top = ny - 1;
  const auto& y = g.y();

  // u rows
  op.L(op.iu(0), op.iu(0)) = 1.0;
  op.algebraic[op.iu(0)] = true;
  for (int j = 1; j < top; ++j) {
    const int r = op.iu(j);
    const double ub = 2.0 * y[j] - y[j] * y[j], uby = 2.0 - 2.0 * y[j];
    op.M(r, op.iu(j)) = d;
    for (int c = 0; c < ny; ++c) op.L(r, op.iu(c)) += (1.0 + sigma) / R * D2(j, c);
    op.L(r, op.iu(j)) += -ub * d * ik + d2 * ik * ik / R;
    op.L(r, op.iv(j)) += -d * uby;
    op.L(r, op.ip(j)) += -2.0 / R * d * ik;
  }
  {
    const int r = op.iu(top);
    op.algebraic[r] = true;
    for (int c = 0; c < ny; ++c) op.L(r, op.iu(c)) = D1(top, c);
    op.L(r, op.iv(top)) += d2 * ik;
    op.L(r, op.ieta()) = -2.0;
  }

  // v rows: the y-momentum for delta v, written for v.
  auto vmom = [&](int r, int j) {
    const double ub = 2.0 * y[j] - y[j] * y[j];
    op.M(r, op.iv(j)) = d2;
    for (int c = 0; c < ny; ++c) {
      op.L(r, op.iv(c)) += d / R * D2(j, c);
      op.L(r, op.ip(c)) += -2.0 / R * D1(j, c);
    }
    op.L(r, op.iv(j)) += -ub * d2 * ik + d2 * d * ik * ik / R;
  };
  op.L(op.iv(0), op.iv(0)) = 1.0;
  op.algebraic[op.iv(0)] = true;
  for (int j = 1; j < top; ++j) vmom(op.iv(j), j);
  {
    const int r = op.iv(top);
    op.algebraic[r] = true;
    op.L(r, op.ip(top)) = 1.0;
    for (int c = 0; c < ny; ++c) op.L(r, op.iv(c)) += -d * D1(top, c);
    op.L(r, op.ieta()) = -p.inv_tan_alpha() - p.surface_tension() / std::sin(p.alpha) * k * k;
  }

  // continuity
  for (int j = 0; j < ny; ++j) {
    const int r = 2 * ny + j;
    if (k == 0.0 && j == top) {
      vmom(r, top);
      continue;
    }
    op.algebraic[r] = true;
    op.L(r, op.iu(j)) = ik;
    for (int c = 0; c < ny; ++c) op.L(r, op.iv(c)) += D1(j, c);
  }

  // kinematic
  op.M(op.ieta(), op.ieta()) = 1.0;
  op.L(op.ieta(), op.iv(top)) = 1.0;
  op.L(op.ieta(), op.ieta()) = -ik;
  return op;
}

}  // namespace filmcascade

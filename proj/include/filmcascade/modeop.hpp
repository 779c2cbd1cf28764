#pragma once

#include <vector>

#include <Eigen/Dense>

#include "filmcascade/params.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

/// Linearisation of the flattened free-surface system about the Nusselt
/// film at one streamwise wavenumber k (d_x -> ik), as a descriptor system
///   M x' = L x + N,   x = [u(0..ny-1), v(0..ny-1), p(0..ny-1), eta].
///
/// Row layout (j = 0 wall, j = ny-1 surface):
///   u rows    j = 0 no-slip; interior x-momentum; j = ny-1 tangential stress
///   v rows    j = 0 no-slip; interior y-momentum; j = ny-1 normal stress
///   div rows  ik u + D v = 0 at every node (k = 0: top row is the y-momentum
///             at the surface instead, since D v = 0 is rank deficient there)
///   kinematic eta' = v(1) - ik eta
/// Algebraic rows have zero rows in M. N carries every term of order eps;
/// sigma moves sigma u_yy / R from the explicit side to the implicit one.
struct ModeOperator {
  int ny = 0;
  Eigen::MatrixXcd M, L;
  std::vector<bool> algebraic;  ///< per row
  int iu(int j) const { return j; }
  int iv(int j) const { return ny + j; }
  int ip(int j) const { return 2 * ny + j; }
  int ieta() const { return 3 * ny; }
  int size() const { return 3 * ny + 1; }
};

ModeOperator mode_operator(const Grid& g, const ScalingParams& p, double k, double sigma = 0.0);

}  // namespace filmcascade

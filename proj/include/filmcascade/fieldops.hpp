#pragma once

// Pointwise algebra on grid fields. Products route through the SIMD
// kernels; everything else is a plain loop the compiler vectorises.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "filmcascade/kernels.hpp"
#include "filmcascade/spectral.hpp"

namespace filmcascade {

inline BulkField operator*(const BulkField& a, const BulkField& b) {
  BulkField out(a.nx, a.ny);
  kernels::mul(a.data.data(), b.data.data(), out.data.data(), a.data.size());
  return out;
}

inline BulkField operator+(const BulkField& a, const BulkField& b) {
  BulkField out = a;
  kernels::axpy(1.0, b.data.data(), out.data.data(), out.data.size());
  return out;
}

inline BulkField operator-(const BulkField& a, const BulkField& b) {
  BulkField out = a;
  kernels::axpy(-1.0, b.data.data(), out.data.data(), out.data.size());
  return out;
}

inline BulkField operator-(const BulkField& a) {
  BulkField out = a;
  for (double& v : out.data) v = -v;
  return out;
}

inline BulkField operator*(double s, const BulkField& a) {
  BulkField out = a;
  for (double& v : out.data) v *= s;
  return out;
}

inline BulkField operator+(double s, const BulkField& a) {
  BulkField out = a;
  for (double& v : out.data) v += s;
  return out;
}

inline BulkField& operator+=(BulkField& a, const BulkField& b) {
  kernels::axpy(1.0, b.data.data(), a.data.data(), a.data.size());
  return a;
}

inline BulkField& operator-=(BulkField& a, const BulkField& b) {
  kernels::axpy(-1.0, b.data.data(), a.data.data(), a.data.size());
  return a;
}

/// out = a*b + c
inline BulkField fma(const BulkField& a, const BulkField& b, const BulkField& c) {
  BulkField out(a.nx, a.ny);
  kernels::fmadd(a.data.data(), b.data.data(), c.data.data(), out.data.data(),
                 a.data.size());
  return out;
}

inline BulkField map(const BulkField& a, const std::function<double(double)>& fn) {
  BulkField out(a.nx, a.ny);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = fn(a.data[i]);
  return out;
}

/// Field depending on y only, broadcast along x.
inline BulkField y_profile(const Grid& g, const std::function<double(double)>& fn) {
  BulkField out = g.zeros();
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) out(i, j) = fn(g.y()[j]);
  return out;
}

/// Surface values broadcast along y.
inline BulkField x_profile(const Grid& g, const std::vector<double>& s) {
  BulkField out = g.zeros();
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) out(i, j) = s[i];
  return out;
}

inline double max_abs(const BulkField& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, v < 0 ? -v : v);
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, v < 0 ? -v : v);
  return m;
}

// Surface vector helpers.
inline std::vector<double> operator*(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  kernels::mul(a.data(), b.data(), out.data(), a.size());
  return out;
}

inline std::vector<double> operator+(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  kernels::axpy(1.0, b.data(), out.data(), out.size());
  return out;
}

inline std::vector<double> operator-(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  kernels::axpy(-1.0, b.data(), out.data(), out.size());
  return out;
}

inline std::vector<double> operator*(double s, const std::vector<double>& a) {
  std::vector<double> out = a;
  for (double& v : out) v *= s;
  return out;
}

/// Two-component vector field, (x, y) = (e1, e2) components.
struct VecField {
  BulkField x, y;
};

inline VecField operator+(const VecField& a, const VecField& b) { return {a.x + b.x, a.y + b.y}; }
inline VecField operator-(const VecField& a, const VecField& b) { return {a.x - b.x, a.y - b.y}; }
inline VecField operator*(double s, const VecField& a) { return {s * a.x, s * a.y}; }

/// 2x2 matrix field; entries indexed (row, column).
struct MatField {
  BulkField xx, xy, yx, yy;

  VecField apply(const VecField& w) const {
    return {fma(xx, w.x, xy * w.y), fma(yx, w.x, yy * w.y)};
  }
  MatField transpose() const { return {xx, yx, xy, yy}; }
};

inline MatField identity_field(const Grid& g) {
  BulkField one = y_profile(g, [](double) { return 1.0; });
  return {one, g.zeros(), g.zeros(), one};
}

inline MatField operator+(const MatField& a, const MatField& b) {
  return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
}
inline MatField operator-(const MatField& a, const MatField& b) {
  return {a.xx - b.xx, a.xy - b.xy, a.yx - b.yx, a.yy - b.yy};
}
inline MatField operator*(const MatField& a, const MatField& b) {
  return {fma(a.xx, b.xx, a.xy * b.yx), fma(a.xx, b.xy, a.xy * b.yy),
          fma(a.yx, b.xx, a.yy * b.yx), fma(a.yx, b.xy, a.yy * b.yy)};
}

}  // namespace filmcascade

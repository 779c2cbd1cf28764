#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace filmcascade {

using cplx = std::complex<double>;

class SpectralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fourier coefficients phi_n, n = 0..nx/2, of a real function on the unit
/// torus; negative modes follow from phi_{-n} = conj(phi_n).
struct SurfaceField {
  int nx = 0;
  std::vector<cplx> coef;

  SurfaceField() = default;
  explicit SurfaceField(int nx_) : nx(nx_), coef(nx_ / 2 + 1, cplx(0.0)) {}
  int nmodes() const { return nx / 2 + 1; }
  cplx mode(int n) const {
    return n >= 0 ? coef[n] : std::conj(coef[-n]);
  }
};

/// Real grid values f(x_i, y_j) stored x-major: data[i*ny + j].
struct BulkField {
  int nx = 0;
  int ny = 0;
  std::vector<double> data;

  BulkField() = default;
  BulkField(int nx_, int ny_) : nx(nx_), ny(ny_), data(nx_ * ny_, 0.0) {}
  double& operator()(int i, int j) { return data[i * ny + j]; }
  double operator()(int i, int j) const { return data[i * ny + j]; }
  std::vector<double> top() const;     ///< restriction to y = 1
  std::vector<double> bottom() const;  ///< restriction to y = 0
};

/// Fourier-in-x representation of a BulkField: c[n*ny + j], n = 0..nx/2.
struct BulkSpectrum {
  int nx = 0;
  int ny = 0;
  std::vector<cplx> c;

  BulkSpectrum() = default;
  BulkSpectrum(int nx_, int ny_)
      : nx(nx_), ny(ny_), c((nx_ / 2 + 1) * ny_, cplx(0.0)) {}
  cplx& operator()(int n, int j) { return c[n * ny + j]; }
  cplx operator()(int n, int j) const { return c[n * ny + j]; }
};

/// Symbol P evaluated at integer frequency n >= 0; must satisfy
/// P(-n) = conj(P(n)) so that real fields stay real.
struct Multiplier {
  std::function<cplx(int)> symbol;
  double order = 0.0;
  bool delta_weighted = false;
  std::string name;

  static Multiplier identity();
  static Multiplier derivative(int order);         ///< (2 pi i n)^order
  static Multiplier abs_power(double s);           ///< |2 pi n|^s
  static Multiplier bessel(double s);              ///< (1 + (2 pi n)^2)^{s/2}
  static Multiplier delta_weight(double a, double delta);  ///< (1+delta|2 pi n|)^a
  static Multiplier one_plus_abs(double m);        ///< (1 + |2 pi n|)^m
  Multiplier then(const Multiplier& q) const;      ///< pointwise product P*Q
};

struct NormWeight {
  double a = 0.0;
  double delta = 1.0;
};

/// 1-D real FFT on the unit torus, normalised so coef[n] is phi_hat_n.
class Fourier1D {
 public:
  explicit Fourier1D(int n);
  ~Fourier1D();
  Fourier1D(const Fourier1D&) = delete;
  Fourier1D& operator=(const Fourier1D&) = delete;

  int size() const { return n_; }
  SurfaceField forward(const std::vector<double>& values) const;
  std::vector<double> inverse(const SurfaceField& f) const;

 private:
  int n_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Tensor grid: nx equispaced points on the torus times ny
/// Chebyshev-Gauss-Lobatto nodes y_j = (1 - cos(pi j/(ny-1)))/2 on [0,1].
/// j = 0 is the bottom, j = ny-1 the free surface. Transform plans and
/// operator matrices are immutable after construction; every method is
/// const and safe to call concurrently.
class Grid {
 public:
  Grid(int nx, int ny);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nmodes() const { return nx_ / 2 + 1; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  /// Clenshaw-Curtis weights on [0,1].
  const std::vector<double>& weights() const { return w_; }
  /// d^order/dy^order collocation matrix, order 1..4 (row-major ny x ny).
  const Eigen::MatrixXd& dy_matrix(int order) const;
  /// Matrix of f -> -int_y^1 f dz.
  const Eigen::MatrixXd& antiderivative_matrix() const { return iy_; }
  /// Row-major copies for the row kernels.
  const double* dy_rowmajor(int order) const;
  const double* antiderivative_rowmajor() const { return iyr_.data(); }
  const Fourier1D& surface_fft() const { return *f1_; }

  // Surface (1-D) transforms.
  SurfaceField fft(const std::vector<double>& values) const;
  std::vector<double> ifft(const SurfaceField& f) const;

  // Bulk transforms along x.
  BulkSpectrum fft(const BulkField& f) const;
  BulkField ifft(const BulkSpectrum& s) const;

  BulkField zeros() const { return BulkField(nx_, ny_); }
  BulkField from_function(const std::function<double(double, double)>& f) const;
  std::vector<double> surface_from_function(
      const std::function<double(double)>& f) const;

 private:
  int nx_, ny_;
  std::vector<double> x_, y_, w_;
  std::vector<Eigen::MatrixXd> dy_;
  Eigen::MatrixXd iy_;
  std::vector<std::vector<double>> dyr_;
  std::vector<double> iyr_;
  std::unique_ptr<Fourier1D> f1_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// ---- Operations ------------------------------------------------------------

SurfaceField apply_multiplier(const Multiplier& p, const SurfaceField& f);
BulkSpectrum apply_multiplier(const Multiplier& p, const BulkSpectrum& f);
BulkField apply_multiplier(const Grid& g, const Multiplier& p, const BulkField& f);
std::vector<double> apply_multiplier(const Grid& g, const Multiplier& p,
                                     const std::vector<double>& surface);

enum class Axis { X, Y };

/// Spectral x-derivative or collocation y-derivative; order <= 4.
BulkField differentiate(const Grid& g, const BulkField& f, Axis axis, int order);
SurfaceField differentiate(const SurfaceField& f, int order);
std::vector<double> differentiate(const Grid& g, const std::vector<double>& f,
                                  int order);

/// Zeroes |n| > nx/3. Idempotent.
SurfaceField dealias(const SurfaceField& f);
BulkSpectrum dealias(const BulkSpectrum& f);
BulkField dealias(const Grid& g, const BulkField& f);
std::vector<double> dealias(const Grid& g, const std::vector<double>& f);

/// |phi|_s with symbol (1+(2 pi n)^2)^{s/2}; with a weight, of
/// (1 + delta|D_x|)^a phi.
double surface_norm(const SurfaceField& f, double s,
                    std::optional<NormWeight> weight = std::nullopt);
/// Homogeneous | |D_x|^s phi |_0.
double surface_norm_homogeneous(const SurfaceField& f, double s);
/// |P(D_x) phi|_s for an arbitrary multiplier.
double surface_norm(const SurfaceField& f, const Multiplier& p, double s);

/// ||f||_s = (sum_{i+j<=s} ||d_x^i d_y^j f||_0^2)^{1/2}.
double bulk_norm(const Grid& g, const BulkField& f, int s);
/// ||P(D_x) f||_0.
double bulk_norm(const Grid& g, const BulkField& f, const Multiplier& p);
double bulk_norm(const Grid& g, const BulkSpectrum& f, const Multiplier& p);
/// (f, h)_Omega.
double bulk_inner(const Grid& g, const BulkField& f, const BulkField& h);
/// (phi, psi)_Gamma for grid values on the torus.
double surface_inner(const std::vector<double>& phi, const std::vector<double>& psi);

BulkField antiderivative_y(const Grid& g, const BulkField& f);

}  // namespace filmcascade

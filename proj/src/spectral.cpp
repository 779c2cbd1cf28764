#include "filmcascade/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "filmcascade/kernels.hpp"

namespace filmcascade {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// fftw_malloc'd scratch so new-array execution sees the planned alignment.
template <typename T>
struct FftwBuffer {
  T* p = nullptr;
  explicit FftwBuffer(std::size_t n) {
    p = static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)));
    if (!p) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// Weight of mode n in a half-spectrum Parseval sum.
inline double parseval_weight(int n, int nx) {
  return (n == 0 || 2 * n == nx) ? 1.0 : 2.0;
}

Eigen::MatrixXd cheb_diff(int ny) {
  const int np = ny - 1;
  Eigen::VectorXd xc(ny);
  for (int j = 0; j < ny; ++j) xc(j) = std::cos(std::numbers::pi * j / np);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(ny, ny);
  auto c = [np](int j) { return ((j == 0 || j == np) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i < ny; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < ny; ++j) {
      if (i == j) continue;
      d(i, j) = c(i) / c(j) / (xc(i) - xc(j));
      rowsum += d(i, j);
    }
    d(i, i) = -rowsum;
  }
  // y = (1 - x)/2, so d/dy = -2 d/dx.
  return -2.0 * d;
}

// f -> -int_y^1 f dz via exact integration of the Chebyshev interpolant.
Eigen::MatrixXd cheb_antiderivative(int ny) {
  const int np = ny - 1;
  Eigen::MatrixXd m(ny, ny);
  std::vector<double> a(np + 3), b(np + 2);
  for (int col = 0; col < ny; ++col) {
    std::fill(a.begin(), a.end(), 0.0);
    // Interpolant coefficients of the unit vector e_col.
    const double cj = (col == 0 || col == np) ? 2.0 : 1.0;
    for (int k = 0; k <= np; ++k) {
      const double ck = (k == 0 || k == np) ? 2.0 : 1.0;
      a[k] = 2.0 / (np * ck) * std::cos(std::numbers::pi * col * k / np) / cj;
    }
    std::fill(b.begin(), b.end(), 0.0);
    b[1] = a[0] - a[2] / 2.0;
    for (int k = 2; k <= np + 1; ++k) b[k] = (a[k - 1] - a[k + 1]) / (2.0 * k);
    double q_minus1 = 0.0;
    for (int k = 1; k <= np + 1; ++k) q_minus1 += b[k] * ((k % 2) ? -1.0 : 1.0);
    for (int j = 0; j < ny; ++j) {
      double q = 0.0;
      for (int k = 1; k <= np + 1; ++k)
        q += b[k] * std::cos(std::numbers::pi * j * k / np);
      m(j, col) = -0.5 * (q - q_minus1);
    }
  }
  return m;
}

}  // namespace

// ---- BulkField -------------------------------------------------------------

std::vector<double> BulkField::top() const {
  std::vector<double> t(nx);
  for (int i = 0; i < nx; ++i) t[i] = data[i * ny + ny - 1];
  return t;
}

std::vector<double> BulkField::bottom() const {
  std::vector<double> t(nx);
  for (int i = 0; i < nx; ++i) t[i] = data[i * ny];
  return t;
}

// ---- Multiplier ------------------------------------------------------------

Multiplier Multiplier::identity() {
  return {[](int) { return cplx(1.0); }, 0.0, false, "identity"};
}

Multiplier Multiplier::derivative(int order) {
  return {[order](int n) { return std::pow(cplx(0.0, kTwoPi * n), order); },
          static_cast<double>(order), false, "d_x^" + std::to_string(order)};
}

Multiplier Multiplier::abs_power(double s) {
  return {[s](int n) {
            if (n == 0) return cplx(s == 0.0 ? 1.0 : 0.0);
            return cplx(std::pow(kTwoPi * std::abs(n), s));
          },
          s, false, "|D|^s"};
}

Multiplier Multiplier::bessel(double s) {
  return {[s](int n) {
            const double k = kTwoPi * n;
            return cplx(std::pow(1.0 + k * k, s / 2.0));
          },
          s, false, "<D>^s"};
}

Multiplier Multiplier::delta_weight(double a, double delta) {
  return {[a, delta](int n) {
            return cplx(std::pow(1.0 + delta * kTwoPi * std::abs(n), a));
          },
          a, true, "(1+delta|D|)^a"};
}

Multiplier Multiplier::one_plus_abs(double m) {
  return {[m](int n) { return cplx(std::pow(1.0 + kTwoPi * std::abs(n), m)); },
          m, false, "(1+|D|)^m"};
}

Multiplier Multiplier::then(const Multiplier& q) const {
  auto p0 = symbol;
  auto q0 = q.symbol;
  return {[p0, q0](int n) { return p0(n) * q0(n); }, order + q.order,
          delta_weighted || q.delta_weighted, name + "*" + q.name};
}

// ---- Fourier1D -------------------------------------------------------------

struct Fourier1D::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Fourier1D::Fourier1D(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 2 || n % 2) throw SpectralError("Fourier1D: size must be even and >= 2");
  FftwBuffer<double> r(n);
  FftwBuffer<fftw_complex> c(n / 2 + 1);
  plans_->fwd = fftw_plan_dft_r2c_1d(n, r.p, c.p, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_c2r_1d(n, c.p, r.p, FFTW_ESTIMATE);
}

Fourier1D::~Fourier1D() {
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
}

SurfaceField Fourier1D::forward(const std::vector<double>& values) const {
  if (static_cast<int>(values.size()) != n_)
    throw SpectralError("Fourier1D::forward: size mismatch");
  FftwBuffer<double> r(n_);
  FftwBuffer<fftw_complex> c(n_ / 2 + 1);
  std::memcpy(r.p, values.data(), sizeof(double) * n_);
  fftw_execute_dft_r2c(plans_->fwd, r.p, c.p);
  SurfaceField f(n_);
  const double s = 1.0 / n_;
  for (int k = 0; k <= n_ / 2; ++k) f.coef[k] = cplx(c.p[k][0], c.p[k][1]) * s;
  return f;
}

std::vector<double> Fourier1D::inverse(const SurfaceField& f) const {
  if (f.nx != n_) throw SpectralError("Fourier1D::inverse: size mismatch");
  FftwBuffer<double> r(n_);
  FftwBuffer<fftw_complex> c(n_ / 2 + 1);
  for (int k = 0; k <= n_ / 2; ++k) {
    c.p[k][0] = f.coef[k].real();
    c.p[k][1] = f.coef[k].imag();
  }
  // Real-valued constraint on the self-conjugate modes.
  c.p[0][1] = 0.0;
  c.p[n_ / 2][1] = 0.0;
  fftw_execute_dft_c2r(plans_->inv, c.p, r.p);
  return std::vector<double>(r.p, r.p + n_);
}

// ---- Grid ------------------------------------------------------------------

struct Grid::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Grid::Grid(int nx, int ny) : nx_(nx), ny_(ny), plans_(std::make_unique<Plans>()) {
  if (nx < 4 || nx % 2) throw SpectralError("Grid: nx must be even and >= 4");
  if (ny < 4) throw SpectralError("Grid: ny must be >= 4");
  x_.resize(nx);
  for (int i = 0; i < nx; ++i) x_[i] = static_cast<double>(i) / nx;
  y_.resize(ny);
  for (int j = 0; j < ny; ++j)
    y_[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * j / (ny - 1)));
  y_.front() = 0.0;
  y_.back() = 1.0;

  dy_.resize(5);
  dy_[1] = cheb_diff(ny);
  for (int k = 2; k <= 4; ++k) dy_[k] = dy_[1] * dy_[k - 1];
  iy_ = cheb_antiderivative(ny);
  w_.resize(ny);
  for (int j = 0; j < ny; ++j) w_[j] = -iy_(0, j);
  auto rowmajor = [ny](const Eigen::MatrixXd& m) {
    std::vector<double> r(ny * ny);
    for (int a = 0; a < ny; ++a)
      for (int b = 0; b < ny; ++b) r[a * ny + b] = m(a, b);
    return r;
  };
  dyr_.resize(5);
  for (int k = 1; k <= 4; ++k) dyr_[k] = rowmajor(dy_[k]);
  iyr_ = rowmajor(iy_);

  f1_ = std::make_unique<Fourier1D>(nx);

  FftwBuffer<double> r(nx * ny);
  FftwBuffer<fftw_complex> c((nx / 2 + 1) * ny);
  int n[1] = {nx};
  plans_->fwd = fftw_plan_many_dft_r2c(1, n, ny, r.p, nullptr, ny, 1, c.p,
                                       nullptr, ny, 1, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_many_dft_c2r(1, n, ny, c.p, nullptr, ny, 1, r.p,
                                       nullptr, ny, 1, FFTW_ESTIMATE);
}

Grid::~Grid() {
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
}

const Eigen::MatrixXd& Grid::dy_matrix(int order) const {
  if (order < 1 || order > 4)
    throw SpectralError("differentiate: order must be in 1..4");
  return dy_[order];
}

const double* Grid::dy_rowmajor(int order) const {
  dy_matrix(order);
  return dyr_[order].data();
}

SurfaceField Grid::fft(const std::vector<double>& values) const {
  return f1_->forward(values);
}

std::vector<double> Grid::ifft(const SurfaceField& f) const { return f1_->inverse(f); }

BulkSpectrum Grid::fft(const BulkField& f) const {
  if (f.nx != nx_ || f.ny != ny_) throw SpectralError("Grid::fft: shape mismatch");
  FftwBuffer<double> r(nx_ * ny_);
  FftwBuffer<fftw_complex> c((nx_ / 2 + 1) * ny_);
  std::memcpy(r.p, f.data.data(), sizeof(double) * nx_ * ny_);
  fftw_execute_dft_r2c(plans_->fwd, r.p, c.p);
  BulkSpectrum s(nx_, ny_);
  const double sc = 1.0 / nx_;
  for (std::size_t k = 0; k < s.c.size(); ++k)
    s.c[k] = cplx(c.p[k][0], c.p[k][1]) * sc;
  return s;
}

BulkField Grid::ifft(const BulkSpectrum& s) const {
  if (s.nx != nx_ || s.ny != ny_) throw SpectralError("Grid::ifft: shape mismatch");
  FftwBuffer<double> r(nx_ * ny_);
  FftwBuffer<fftw_complex> c((nx_ / 2 + 1) * ny_);
  for (std::size_t k = 0; k < s.c.size(); ++k) {
    c.p[k][0] = s.c[k].real();
    c.p[k][1] = s.c[k].imag();
  }
  for (int j = 0; j < ny_; ++j) {
    c.p[j][1] = 0.0;
    c.p[(nx_ / 2) * ny_ + j][1] = 0.0;
  }
  fftw_execute_dft_c2r(plans_->inv, c.p, r.p);
  BulkField f(nx_, ny_);
  std::memcpy(f.data.data(), r.p, sizeof(double) * nx_ * ny_);
  return f;
}

BulkField Grid::from_function(const std::function<double(double, double)>& fn) const {
  BulkField f(nx_, ny_);
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) f(i, j) = fn(x_[i], y_[j]);
  return f;
}

std::vector<double> Grid::surface_from_function(
    const std::function<double(double)>& fn) const {
  std::vector<double> v(nx_);
  for (int i = 0; i < nx_; ++i) v[i] = fn(x_[i]);
  return v;
}

// ---- Multipliers and derivatives -------------------------------------------

namespace {

// Self-conjugate Nyquist mode keeps only Re P so the output stays real.
inline cplx symbol_at(const Multiplier& p, int n, int nx) {
  cplx s = p.symbol(n);
  if (2 * n == nx) s = cplx(s.real(), 0.0);
  return s;
}

}  // namespace

SurfaceField apply_multiplier(const Multiplier& p, const SurfaceField& f) {
  SurfaceField out(f.nx);
  std::vector<cplx> sym(f.nmodes());
  for (int n = 0; n < f.nmodes(); ++n) sym[n] = symbol_at(p, n, f.nx);
  kernels::cmul(sym.data(), f.coef.data(), out.coef.data(), sym.size());
  return out;
}

BulkSpectrum apply_multiplier(const Multiplier& p, const BulkSpectrum& f) {
  BulkSpectrum out(f.nx, f.ny);
  const int nm = f.nx / 2 + 1;
  std::vector<cplx> sym(f.ny);
  for (int n = 0; n < nm; ++n) {
    std::fill(sym.begin(), sym.end(), symbol_at(p, n, f.nx));
    kernels::cmul(sym.data(), &f.c[n * f.ny], &out.c[n * f.ny], f.ny);
  }
  return out;
}

BulkField apply_multiplier(const Grid& g, const Multiplier& p, const BulkField& f) {
  return g.ifft(apply_multiplier(p, g.fft(f)));
}

std::vector<double> apply_multiplier(const Grid& g, const Multiplier& p,
                                     const std::vector<double>& surface) {
  return g.ifft(apply_multiplier(p, g.fft(surface)));
}

BulkField differentiate(const Grid& g, const BulkField& f, Axis axis, int order) {
  if (order < 0 || order > 4)
    throw SpectralError("differentiate: order must be in 0..4");
  if (order == 0) return f;
  if (axis == Axis::X) return apply_multiplier(g, Multiplier::derivative(order), f);
  BulkField out(f.nx, f.ny);
  kernels::rows_matmul(g.dy_rowmajor(order), f.ny, f.data.data(), f.nx,
                       out.data.data());
  return out;
}

SurfaceField differentiate(const SurfaceField& f, int order) {
  if (order < 0 || order > 4)
    throw SpectralError("differentiate: order must be in 0..4");
  return apply_multiplier(Multiplier::derivative(order), f);
}

std::vector<double> differentiate(const Grid& g, const std::vector<double>& f,
                                  int order) {
  return g.ifft(differentiate(g.fft(f), order));
}

SurfaceField dealias(const SurfaceField& f) {
  SurfaceField out = f;
  for (int n = 0; n < f.nmodes(); ++n)
    if (3 * n > f.nx) out.coef[n] = 0.0;
  return out;
}

BulkSpectrum dealias(const BulkSpectrum& f) {
  BulkSpectrum out = f;
  const int nm = f.nx / 2 + 1;
  for (int n = 0; n < nm; ++n)
    if (3 * n > f.nx)
      for (int j = 0; j < f.ny; ++j) out(n, j) = 0.0;
  return out;
}

BulkField dealias(const Grid& g, const BulkField& f) { return g.ifft(dealias(g.fft(f))); }

std::vector<double> dealias(const Grid& g, const std::vector<double>& f) {
  return g.ifft(dealias(g.fft(f)));
}

// ---- Norms -----------------------------------------------------------------

double surface_norm(const SurfaceField& f, double s, std::optional<NormWeight> weight) {
  if (s < 0.0) throw SpectralError("surface_norm: s must be >= 0");
  double acc = 0.0;
  for (int n = 0; n < f.nmodes(); ++n) {
    const double k = kTwoPi * n;
    double sym = std::pow(1.0 + k * k, s);
    if (weight) sym *= std::pow(1.0 + weight->delta * k, 2.0 * weight->a);
    acc += parseval_weight(n, f.nx) * sym * std::norm(f.coef[n]);
  }
  return std::sqrt(acc);
}

double surface_norm_homogeneous(const SurfaceField& f, double s) {
  double acc = 0.0;
  for (int n = 1; n < f.nmodes(); ++n)
    acc += parseval_weight(n, f.nx) * std::pow(kTwoPi * n, 2.0 * s) * std::norm(f.coef[n]);
  if (s == 0.0) acc += std::norm(f.coef[0]);
  return std::sqrt(acc);
}

double surface_norm(const SurfaceField& f, const Multiplier& p, double s) {
  double acc = 0.0;
  for (int n = 0; n < f.nmodes(); ++n) {
    const double k = kTwoPi * n;
    acc += parseval_weight(n, f.nx) * std::pow(1.0 + k * k, s) *
           std::norm(symbol_at(p, n, f.nx) * f.coef[n]);
  }
  return std::sqrt(acc);
}

double bulk_norm(const Grid& g, const BulkSpectrum& f, const Multiplier& p) {
  const auto& w = g.weights();
  double acc = 0.0;
  for (int n = 0; n < g.nmodes(); ++n) {
    const double sym = std::norm(symbol_at(p, n, g.nx()));
    double col = 0.0;
    for (int j = 0; j < g.ny(); ++j) col += w[j] * std::norm(f(n, j));
    acc += parseval_weight(n, g.nx()) * sym * col;
  }
  return std::sqrt(acc);
}

double bulk_norm(const Grid& g, const BulkField& f, const Multiplier& p) {
  return bulk_norm(g, g.fft(f), p);
}

double bulk_norm(const Grid& g, const BulkField& f, int s) {
  if (s < 0 || s > 4) throw SpectralError("bulk_norm: s must be in 0..4");
  double acc = 0.0;
  for (int j = 0; j <= s; ++j) {
    BulkField fy = differentiate(g, f, Axis::Y, j);
    for (int i = 0; i + j <= s; ++i) {
      const double nrm = bulk_norm(g, fy, Multiplier::derivative(i));
      acc += nrm * nrm;
    }
  }
  return std::sqrt(acc);
}

double bulk_inner(const Grid& g, const BulkField& f, const BulkField& h) {
  const auto& w = g.weights();
  double acc = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) acc += w[j] * f(i, j) * h(i, j);
  return acc / g.nx();
}

double surface_inner(const std::vector<double>& phi, const std::vector<double>& psi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) acc += phi[i] * psi[i];
  return acc / static_cast<double>(phi.size());
}

BulkField antiderivative_y(const Grid& g, const BulkField& f) {
  BulkField out(f.nx, f.ny);
  kernels::rows_matmul(g.antiderivative_rowmajor(), f.ny, f.data.data(), f.nx,
                       out.data.data());
  return out;
}

}  // namespace filmcascade

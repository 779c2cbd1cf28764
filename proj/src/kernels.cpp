#include "filmcascade/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace filmcascade::kernels {

namespace scalar {

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void fmadd(const double* a, const double* b, const double* c, double* out,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i] + c[i];
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void rows_matmul(const double* d, std::size_t ny, const double* f,
                 std::size_t nrows, double* out) {
  for (std::size_t i = 0; i < nrows; ++i) {
    const double* fr = f + i * ny;
    double* orow = out + i * ny;
    for (std::size_t j = 0; j < ny; ++j) {
      const double* dr = d + j * ny;
      double acc = 0.0;
      for (std::size_t k = 0; k < ny; ++k) acc += dr[k] * fr[k];
      orow[j] = acc;
    }
  }
}

void cmul(const std::complex<double>* p, const std::complex<double>* f,
          std::complex<double>* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = p[i] * f[i];
}

}  // namespace scalar

namespace {

Backend detect() {
  if (const char* env = std::getenv("FILMCASCADE_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

Backend& current() {
  static Backend b = detect();
  return b;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available())
    throw std::runtime_error("AVX2 backend requested but CPU lacks AVX2/FMA");
  current() = b;
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  if (current() == Backend::Avx2) return avx2::mul(a, b, out, n);
  scalar::mul(a, b, out, n);
}

void fmadd(const double* a, const double* b, const double* c, double* out,
           std::size_t n) {
  if (current() == Backend::Avx2) return avx2::fmadd(a, b, c, out, n);
  scalar::fmadd(a, b, c, out, n);
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  if (current() == Backend::Avx2) return avx2::axpy(s, x, y, n);
  scalar::axpy(s, x, y, n);
}

void rows_matmul(const double* d, std::size_t ny, const double* f,
                 std::size_t nrows, double* out) {
  if (current() == Backend::Avx2) return avx2::rows_matmul(d, ny, f, nrows, out);
  scalar::rows_matmul(d, ny, f, nrows, out);
}

void cmul(const std::complex<double>* p, const std::complex<double>* f,
          std::complex<double>* out, std::size_t n) {
  if (current() == Backend::Avx2) return avx2::cmul(p, f, out, n);
  scalar::cmul(p, f, out, n);
}

}  // namespace filmcascade::kernels

#pragma once

#include <complex>
#include <cstddef>

// Hot loops of the pseudo-spectral engine. Each kernel has a scalar
// reference and an AVX2/FMA variant; the dispatcher picks one at runtime.
// The variants agree to rounding (FMA contraction and reduction order
// differ), which the unit tests bound at a few ulp relative.

namespace filmcascade::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
/// Forces a backend; requesting Avx2 on a CPU without it throws.
void set_backend(Backend b);
bool avx2_available();
const char* backend_name(Backend b);

// out[i] = a[i] * b[i]
void mul(const double* a, const double* b, double* out, std::size_t n);
// out[i] = a[i] * b[i] + c[i]
void fmadd(const double* a, const double* b, const double* c, double* out,
           std::size_t n);
// y[i] += s * x[i]
void axpy(double s, const double* x, double* y, std::size_t n);
// out[i*ny + j] = sum_k d[j*ny + k] * f[i*ny + k]   (apply d along rows)
void rows_matmul(const double* d, std::size_t ny, const double* f,
                 std::size_t nrows, double* out);
// out[i] = p[i] * f[i], complex
void cmul(const std::complex<double>* p, const std::complex<double>* f,
          std::complex<double>* out, std::size_t n);

namespace scalar {
void mul(const double* a, const double* b, double* out, std::size_t n);
void fmadd(const double* a, const double* b, const double* c, double* out,
           std::size_t n);
void axpy(double s, const double* x, double* y, std::size_t n);
void rows_matmul(const double* d, std::size_t ny, const double* f,
                 std::size_t nrows, double* out);
void cmul(const std::complex<double>* p, const std::complex<double>* f,
          std::complex<double>* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
void mul(const double* a, const double* b, double* out, std::size_t n);
void fmadd(const double* a, const double* b, const double* c, double* out,
           std::size_t n);
void axpy(double s, const double* x, double* y, std::size_t n);
void rows_matmul(const double* d, std::size_t ny, const double* f,
                 std::size_t nrows, double* out);
void cmul(const std::complex<double>* p, const std::complex<double>* f,
          std::complex<double>* out, std::size_t n);
}  // namespace avx2

}  // namespace filmcascade::kernels

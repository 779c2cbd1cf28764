// AVX2/FMA variants. Compiled without -mavx2; each function carries a
// target attribute so the translation unit stays loadable on older CPUs.

#include "filmcascade/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define FC_AVX2 __attribute__((target("avx2,fma")))
#else
#define FC_AVX2
#endif

namespace filmcascade::kernels::avx2 {

#if defined(__x86_64__) || defined(__i386__)

FC_AVX2 void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

FC_AVX2 void fmadd(const double* a, const double* b, const double* c,
                   double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    __m256d vc = _mm256_loadu_pd(c + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, vb, vc));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i] + c[i];
}

FC_AVX2 void axpy(double s, const double* x, double* y, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

namespace {

FC_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

FC_AVX2 void rows_matmul(const double* d, std::size_t ny, const double* f,
                         std::size_t nrows, double* out) {
  for (std::size_t i = 0; i < nrows; ++i) {
    const double* fr = f + i * ny;
    double* orow = out + i * ny;
    for (std::size_t j = 0; j < ny; ++j) {
      const double* dr = d + j * ny;
      __m256d acc = _mm256_setzero_pd();
      std::size_t k = 0;
      for (; k + 4 <= ny; k += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(dr + k), _mm256_loadu_pd(fr + k),
                              acc);
      double s = hsum(acc);
      for (; k < ny; ++k) s += dr[k] * fr[k];
      orow[j] = s;
    }
  }
}

FC_AVX2 void cmul(const std::complex<double>* p, const std::complex<double>* f,
                  std::complex<double>* out, std::size_t n) {
  const double* pp = reinterpret_cast<const double*>(p);
  const double* fp = reinterpret_cast<const double*>(f);
  double* op = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  // Two complex numbers per register: [re0 im0 re1 im1].
  for (; i + 2 <= n; i += 2) {
    __m256d a = _mm256_loadu_pd(pp + 2 * i);
    __m256d b = _mm256_loadu_pd(fp + 2 * i);
    __m256d a_re = _mm256_movedup_pd(a);
    __m256d a_im = _mm256_permute_pd(a, 0xF);
    __m256d b_sw = _mm256_permute_pd(b, 0x5);
    __m256d t = _mm256_mul_pd(a_im, b_sw);
    _mm256_storeu_pd(op + 2 * i, _mm256_fmaddsub_pd(a_re, b, t));
  }
  for (; i < n; ++i) out[i] = p[i] * f[i];
}

#else

void mul(const double* a, const double* b, double* out, std::size_t n) {
  scalar::mul(a, b, out, n);
}
void fmadd(const double* a, const double* b, const double* c, double* out,
           std::size_t n) {
  scalar::fmadd(a, b, c, out, n);
}
void axpy(double s, const double* x, double* y, std::size_t n) {
  scalar::axpy(s, x, y, n);
}
void rows_matmul(const double* d, std::size_t ny, const double* f,
                 std::size_t nrows, double* out) {
  scalar::rows_matmul(d, ny, f, nrows, out);
}
void cmul(const std::complex<double>* p, const std::complex<double>* f,
          std::complex<double>* out, std::size_t n) {
  scalar::cmul(p, f, out, n);
}

#endif

}  // namespace filmcascade::kernels::avx2

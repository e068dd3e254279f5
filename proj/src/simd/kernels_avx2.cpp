// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "gsp/simd/kernels.hpp"

namespace gsp::simd {
namespace detail {

namespace {

// alpha * x for two packed complex numbers [xr0, xi0, xr1, xi1].
inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d x) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, swapped));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void caxpy_avx2(std::size_t n, Complex alpha, const Complex* x, Complex* y) noexcept {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_broadcast(ar, ai, xv)));
  }
  if (i < n) {
    scalar_kernels().caxpy(n - i, alpha, x + i, y + i);
  }
}

void real_scaled_caxpy_avx2(std::size_t n, Complex alpha, const double* r, const Complex* x,
                            Complex* y) noexcept {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d rv = _mm256_set_pd(r[i + 1], r[i + 1], r[i], r[i]);
    const __m256d xv = _mm256_mul_pd(rv, _mm256_loadu_pd(xd + 2 * i));
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_broadcast(ar, ai, xv)));
  }
  if (i < n) {
    scalar_kernels().real_scaled_caxpy(n - i, alpha, r + i, x + i, y + i);
  }
}

double weighted_norm2_avx2(std::size_t n, const double* w, const Complex* x) noexcept {
  auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d wv = _mm256_set_pd(w[i + 1], w[i + 1], w[i], w[i]);
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(wv, _mm256_mul_pd(xv, xv), acc);
  }
  double total = hsum(acc);
  if (i < n) {
    total += scalar_kernels().weighted_norm2(n - i, w + i, x + i);
  }
  return total;
}

Complex weighted_dot_avx2(std::size_t n, const double* w, const Complex* x,
                          const Complex* y) noexcept {
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<const double*>(y);
  // Lanes: re accumulates xr*yr + xi*yi, im accumulates xr*yi - xi*yr.
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d wv = _mm256_set_pd(w[i + 1], w[i + 1], w[i], w[i]);
    const __m256d xv = _mm256_mul_pd(wv, _mm256_loadu_pd(xd + 2 * i));
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    re = _mm256_fmadd_pd(xv, yv, re);
    // [xr*yi, xi*yr, ...]
    im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), im);
  }
  alignas(32) double imv[4];
  _mm256_store_pd(imv, im);
  Complex total(hsum(re), (imv[0] - imv[1]) + (imv[2] - imv[3]));
  if (i < n) {
    total += scalar_kernels().weighted_dot(n - i, w + i, x + i, y + i);
  }
  return total;
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{"avx2", caxpy_avx2, real_scaled_caxpy_avx2,
                                 weighted_norm2_avx2, weighted_dot_avx2};
  return table;
}

}  // namespace detail
}  // namespace gsp::simd

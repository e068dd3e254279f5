#include "gsp/simd/kernels.hpp"

namespace gsp::simd {
namespace {

// Complex products are spelled out so the reference path does not go through
// the libgcc NaN-recovery routine.
void caxpy_scalar(std::size_t n, Complex alpha, const Complex* x, Complex* y) noexcept {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = Complex(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

void real_scaled_caxpy_scalar(std::size_t n, Complex alpha, const double* r, const Complex* x,
                              Complex* y) noexcept {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = r[i] * x[i].real();
    const double xi = r[i] * x[i].imag();
    y[i] = Complex(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

double weighted_norm2_scalar(std::size_t n, const double* w, const Complex* x) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  }
  return acc;
}

Complex weighted_dot_scalar(std::size_t n, const double* w, const Complex* x,
                            const Complex* y) noexcept {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double yr = y[i].real();
    const double yi = y[i].imag();
    re += w[i] * (xr * yr + xi * yi);
    im += w[i] * (xr * yi - xi * yr);
  }
  return {re, im};
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", caxpy_scalar, real_scaled_caxpy_scalar,
                                 weighted_norm2_scalar, weighted_dot_scalar};
  return table;
}

}  // namespace gsp::simd

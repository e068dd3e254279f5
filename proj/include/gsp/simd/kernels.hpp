#pragma once

// Data-parallel inner loops shared by the series engine and the Fock oracle.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2/FMA variant. The active table is chosen once at first
// use from the CPU features and the GSP_SIMD environment variable
// (`scalar`, `avx2` or `auto`).

#include <complex>
#include <cstddef>
#include <string_view>

namespace gsp::simd {

using Complex = std::complex<double>;

struct KernelTable {
  std::string_view name;

  /// y[i] += alpha * x[i]
  void (*caxpy)(std::size_t n, Complex alpha, const Complex* x, Complex* y) noexcept;

  /// y[i] += alpha * r[i] * x[i], r real.
  void (*real_scaled_caxpy)(std::size_t n, Complex alpha, const double* r,
                            const Complex* x, Complex* y) noexcept;

  /// sum_i w[i] * |x[i]|^2
  double (*weighted_norm2)(std::size_t n, const double* w, const Complex* x) noexcept;

  /// sum_i w[i] * conj(x[i]) * y[i]
  Complex (*weighted_dot)(std::size_t n, const double* w, const Complex* x,
                          const Complex* y) noexcept;
};

const KernelTable& scalar_kernels() noexcept;

/// The AVX2/FMA table, or nullptr when it was not compiled in or the CPU
/// lacks the instructions.
const KernelTable* avx2_kernels() noexcept;

/// Table used by the library.
const KernelTable& active() noexcept;

}  // namespace gsp::simd

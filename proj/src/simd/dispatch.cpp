// Kernel selection only; no intrinsics in this file.

#include <cstdlib>
#include <string_view>

#include "gsp/simd/kernels.hpp"

namespace gsp::simd {

#if defined(GSP_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table() noexcept;
}
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(GSP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("GSP_SIMD");
  const std::string_view request = env != nullptr ? env : "auto";
  if (request == "scalar") {
    return scalar_kernels();
  }
  if (const KernelTable* avx2 = avx2_kernels()) {
    return *avx2;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace gsp::simd

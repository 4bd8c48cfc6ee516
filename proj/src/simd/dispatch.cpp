#include "dualdepth/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace dualdepth::simd {

#ifdef DUALDEPTH_HAVE_AVX2
const Kernels& avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(DUALDEPTH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernels_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active_kernels() {
  static const Kernels& chosen = [&]() -> const Kernels& {
    const char* env = std::getenv("DUALDEPTH_SIMD");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return *k;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace dualdepth::simd

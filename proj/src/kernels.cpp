#include "hhfide/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace hhfide::kernels {

#if defined(HHFIDE_HAVE_AVX2)
namespace detail {
const KernelSet& avx2_kernel_table();
}
#endif

const KernelSet* avx2_kernels() {
#if defined(HHFIDE_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active() {
  static const KernelSet& chosen = []() -> const KernelSet& {
    const char* force = std::getenv("HHFIDE_FORCE_SCALAR");
    const bool forced = force != nullptr && *force != '\0' && std::string_view(force) != "0";
    if (!forced) {
      if (const KernelSet* simd = avx2_kernels()) return *simd;
    }
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace hhfide::kernels

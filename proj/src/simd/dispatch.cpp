#include <cstdlib>
#include <string_view>

#include "penkin/simd/kernels.hpp"

namespace penkin::simd {

#ifndef PENKIN_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

const KernelTable& kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (const char* env = std::getenv("PENKIN_SIMD"); env && std::string_view(env) == "scalar") {
      return scalar_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace penkin::simd

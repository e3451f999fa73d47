#include <cstdlib>
#include <string_view>

#include "mgpkit/simd/kernels.hpp"

namespace mgpkit::simd {

#if defined(MGPKIT_HAVE_AVX2)
const KernelSet& avx2_kernels_impl();
#endif
#if defined(MGPKIT_HAVE_NEON)
const KernelSet& neon_kernels_impl();
#endif

std::vector<const KernelSet*> available_kernels() {
  std::vector<const KernelSet*> out{&scalar_kernels()};
#if defined(MGPKIT_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) out.push_back(&avx2_kernels_impl());
#endif
#if defined(MGPKIT_HAVE_NEON)
  out.push_back(&neon_kernels_impl());
#endif
  return out;
}

namespace {

const KernelSet& select_kernels() {
  const auto variants = available_kernels();
  if (const char* forced = std::getenv("MGPKIT_SIMD")) {
    for (const KernelSet* k : variants)
      if (k->name == std::string_view(forced)) return *k;
    return scalar_kernels();
  }
  return *variants.back();
}

}  // namespace

const KernelSet& active_kernels() {
  static const KernelSet& chosen = select_kernels();
  return chosen;
}

}  // namespace mgpkit::simd

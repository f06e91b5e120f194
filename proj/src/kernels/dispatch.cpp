#include <cstdlib>
#include <string_view>

#include "ipm/kernels.hpp"

namespace ipm::simd {

#if defined(IPM_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(IPM_HAVE_NEON)
const KernelTable& neon_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(IPM_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &avx2_table();
#endif
  return nullptr;
}

const KernelTable* neon_kernels() {
#if defined(IPM_HAVE_NEON)
  return &neon_table();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select_kernels() {
  const char* env = std::getenv("IPM_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace ipm::simd

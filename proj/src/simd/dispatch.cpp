#include <atomic>
#include <cstdlib>
#include <string_view>

#include "zd/simd/kernels.hpp"

namespace zd::simd {

#if defined(ZD_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(ZD_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

const KernelTable* vector_kernels() {
#if defined(ZD_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &avx2_kernels();
  return nullptr;
#elif defined(ZD_HAVE_NEON)
  return &neon_kernels();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("ZD_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const KernelTable* v = vector_kernels()) return v;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

void set_active_kernels(const KernelTable& table) { active_slot().store(&table, std::memory_order_release); }

}  // namespace zd::simd

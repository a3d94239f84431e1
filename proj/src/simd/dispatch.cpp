#include <atomic>
#include <cstdlib>
#include <string_view>

#include "vqeq/simd/kernels.hpp"

namespace vqeq::simd {

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Backend b) noexcept {
  if (!backend_supported(b)) return scalar_kernels();
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return avx2_kernels();
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return neon_kernels();
#endif
    default:
      return scalar_kernels();
  }
}

namespace {

Backend detect() noexcept {
  if (const char* env = std::getenv("VQEQ_SIMD")) {
    const std::string_view s(env);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    if (s == "neon" && backend_supported(Backend::neon)) return Backend::neon;
  }
  if (backend_supported(Backend::avx2)) return Backend::avx2;
  if (backend_supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{&kernels_for(detect())};
  return table;
}

}  // namespace

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_relaxed); }

void set_backend(Backend b) noexcept { active().store(&kernels_for(b), std::memory_order_relaxed); }

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace vqeq::simd

#pragma once
// Complex double inner loops with a scalar reference and vectorized variants.
//
// All variants compute the same quantity. Results may differ in the last ulp
// because of FMA contraction and reduction order; equivalence is checked by
// tests/unit/test_simd.cpp.

#include <span>
#include <string_view>

#include "vqeq/types.hpp"

namespace vqeq::simd {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  // out[i] += a[i] * b[i]
  void (*cmul_acc)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
  // out[i] = a[i] * conj(b[i])
  void (*cmul_conj)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
  // sum a[i] * b[i]
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  // y[i] += alpha * conj(x[i])
  void (*axpy_conj)(cplx* y, cplx alpha, const cplx* x, std::size_t n);
  // sum |x[i]|^2
  double (*energy)(const cplx* x, std::size_t n);
};

[[nodiscard]] const KernelTable& scalar_kernels() noexcept;
#if defined(__x86_64__) || defined(_M_X64)
[[nodiscard]] const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(__aarch64__)
[[nodiscard]] const KernelTable& neon_kernels() noexcept;
#endif

/// True when the running CPU can execute the given backend.
[[nodiscard]] bool backend_supported(Backend b) noexcept;

/// Kernel table for a specific backend; falls back to scalar when unsupported.
[[nodiscard]] const KernelTable& kernels_for(Backend b) noexcept;

/// Active table. Chosen once from CPU features, overridable with VQEQ_SIMD=scalar|avx2|neon
/// or set_backend().
[[nodiscard]] const KernelTable& kernels() noexcept;
void set_backend(Backend b) noexcept;

[[nodiscard]] std::string_view backend_name(Backend b) noexcept;

// Span conveniences over the active table.
inline void cmul_acc(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b) {
  require_same_size(out.size(), a.size(), "cmul_acc");
  require_same_size(out.size(), b.size(), "cmul_acc");
  kernels().cmul_acc(out.data(), a.data(), b.data(), out.size());
}
inline void cmul_conj(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b) {
  require_same_size(out.size(), a.size(), "cmul_conj");
  require_same_size(out.size(), b.size(), "cmul_conj");
  kernels().cmul_conj(out.data(), a.data(), b.data(), out.size());
}
[[nodiscard]] inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  require_same_size(a.size(), b.size(), "dot");
  return kernels().dot(a.data(), b.data(), a.size());
}
inline void axpy_conj(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
  require_same_size(y.size(), x.size(), "axpy_conj");
  kernels().axpy_conj(y.data(), alpha, x.data(), y.size());
}
[[nodiscard]] inline double energy(std::span<const cplx> x) { return kernels().energy(x.data(), x.size()); }

}  // namespace vqeq::simd

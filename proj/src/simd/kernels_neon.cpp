// AArch64 only. One complex double per float64x2_t.
#include <arm_neon.h>

#include "vqeq/simd/kernels.hpp"

namespace vqeq::simd {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

// [ar*br - ai*bi, ai*br + ar*bi]
inline float64x2_t cmul1(float64x2_t a, float64x2_t b) {
  const float64x2_t b_re = vdupq_laneq_f64(b, 0);
  const float64x2_t b_im = vdupq_laneq_f64(b, 1);
  const float64x2_t a_sw = vextq_f64(a, a, 1);
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(a, b_re), vmulq_f64(a_sw, sign), b_im);
}

inline float64x2_t conj1(float64x2_t v) {
  const float64x2_t sign = {1.0, -1.0};
  return vmulq_f64(v, sign);
}

void cmul_acc_neon(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t r = cmul1(vld1q_f64(dp(a + i)), vld1q_f64(dp(b + i)));
    vst1q_f64(dp(out + i), vaddq_f64(vld1q_f64(dp(out + i)), r));
  }
}

void cmul_conj_neon(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(dp(out + i), cmul1(vld1q_f64(dp(a + i)), conj1(vld1q_f64(dp(b + i)))));
}

cplx dot_neon(const cplx* a, const cplx* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc0 = vaddq_f64(acc0, cmul1(vld1q_f64(dp(a + i)), vld1q_f64(dp(b + i))));
    acc1 = vaddq_f64(acc1, cmul1(vld1q_f64(dp(a + i + 1)), vld1q_f64(dp(b + i + 1))));
  }
  if (i < n) acc0 = vaddq_f64(acc0, cmul1(vld1q_f64(dp(a + i)), vld1q_f64(dp(b + i))));
  const float64x2_t s = vaddq_f64(acc0, acc1);
  return {vgetq_lane_f64(s, 0), vgetq_lane_f64(s, 1)};
}

void axpy_conj_neon(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
  const float64x2_t al = {alpha.real(), alpha.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t r = cmul1(al, conj1(vld1q_f64(dp(x + i))));
    vst1q_f64(dp(y + i), vaddq_f64(vld1q_f64(dp(y + i)), r));
  }
}

double energy_neon(const cplx* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(dp(x + i));
    acc = vfmaq_f64(acc, v, v);
  }
  return vaddvq_f64(acc);
}

constexpr KernelTable kNeon{Backend::neon, cmul_acc_neon, cmul_conj_neon, dot_neon, axpy_conj_neon, energy_neon};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace vqeq::simd

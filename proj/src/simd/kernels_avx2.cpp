// Compiled with -mavx2 -mfma; only reached after a cpuid check.
#include <immintrin.h>

#include "vqeq/simd/kernels.hpp"

namespace vqeq::simd {
namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// a * conj(b)
inline __m256d cmulc2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmsubadd_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline cplx hsum2(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

void cmul_acc_avx2(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + i));
    const __m256d vb = _mm256_loadu_pd(dp(b + i));
    const __m256d vo = _mm256_loadu_pd(dp(out + i));
    _mm256_storeu_pd(dp(out + i), _mm256_add_pd(vo, cmul2(va, vb)));
  }
  for (; i < n; ++i) out[i] += a[i] * b[i];
}

void cmul_conj_avx2(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + i));
    const __m256d vb = _mm256_loadu_pd(dp(b + i));
    _mm256_storeu_pd(dp(out + i), cmulc2(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul2(_mm256_loadu_pd(dp(a + i)), _mm256_loadu_pd(dp(b + i))));
    acc1 = _mm256_add_pd(acc1, cmul2(_mm256_loadu_pd(dp(a + i + 2)), _mm256_loadu_pd(dp(b + i + 2))));
  }
  for (; i + 2 <= n; i += 2)
    acc0 = _mm256_add_pd(acc0, cmul2(_mm256_loadu_pd(dp(a + i)), _mm256_loadu_pd(dp(b + i))));
  cplx s = hsum2(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_conj_avx2(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
  // alpha * conj(x) == conj(conj(alpha) * x)
  const __m256d al = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  const __m256d neg_im = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_xor_pd(_mm256_loadu_pd(dp(x + i)), neg_im);
    const __m256d vy = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(vy, cmul2(al, vx)));
  }
  for (; i < n; ++i) y[i] += alpha * std::conj(x[i]);
}

double energy_avx2(const cplx* x, std::size_t n) {
  const double* d = dp(x);
  const std::size_t m = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(d + i);
    const __m256d v1 = _mm256_loadu_pd(d + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= m; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(d + i);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
  }
  const cplx h = hsum2(_mm256_add_pd(acc0, acc1));
  double s = h.real() + h.imag();
  for (; i < m; ++i) s += d[i] * d[i];
  return s;
}

constexpr KernelTable kAvx2{Backend::avx2, cmul_acc_avx2, cmul_conj_avx2, dot_avx2, axpy_conj_avx2, energy_avx2};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace vqeq::simd

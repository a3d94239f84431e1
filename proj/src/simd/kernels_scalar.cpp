#include "vqeq/simd/kernels.hpp"

namespace vqeq::simd {
namespace {

void cmul_acc_scalar(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] += cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void cmul_conj_scalar(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br + ai * bi, ai * br - ar * bi);
  }
}

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

void axpy_conj_scalar(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr + ai * xi, ai * xr - ar * xi);
  }
}

double energy_scalar(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

constexpr KernelTable kScalar{Backend::scalar, cmul_acc_scalar, cmul_conj_scalar, dot_scalar, axpy_conj_scalar,
                              energy_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace vqeq::simd

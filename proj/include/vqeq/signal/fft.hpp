#pragma once
// Discrete Fourier transform.
//
// Convention: forward is unnormalized, X[k] = sum_n x[n] exp(-j 2 pi k n / size);
// inverse carries the 1/size factor. With this convention the FFT of a
// zero-padded tap vector equals the filter's frequency response, and
// ifft(fft(x)) == x.

#include <span>

#include "vqeq/types.hpp"

namespace vqeq::signal {

/// Forward DFT. Throws ConfigError if size is not a power of two, ShapeError if x.size() != size.
[[nodiscard]] CVec fft(std::span<const cplx> x, std::size_t size);
[[nodiscard]] CVec ifft(std::span<const cplx> x, std::size_t size);

// Allocation-free variants; out.size() must equal in.size() (a power of two). in and out may alias.
void fft_into(std::span<const cplx> in, std::span<cplx> out);
void ifft_into(std::span<const cplx> in, std::span<cplx> out);

/// fft of taps zero-padded to size (taps.size() <= size).
[[nodiscard]] CVec fft_zero_padded(std::span<const cplx> taps, std::size_t size);

}  // namespace vqeq::signal

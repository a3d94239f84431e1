#pragma once

#include <span>
#include <utility>

#include "vqeq/types.hpp"

namespace vqeq::signal {

/// One 50%-overlap overlap-save step.
///
/// Returns the last M samples of ifft(fft([prev, cur]) * fd_filter). When fd_filter is the
/// 2M-point FFT of a filter with at most M+1 leading taps these are exactly the linear
/// convolution outputs aligned with `cur`.
[[nodiscard]] CVec overlap_save_filter(std::span<const cplx> prev_block, std::span<const cplx> cur_block,
                                       std::span<const cplx> fd_filter);

/// Samples 0,2,4,... and 1,3,5,... of each polarization.
[[nodiscard]] std::pair<DualPolBlock, DualPolBlock> split_even_odd(const DualPolBlock& block);
[[nodiscard]] DualPolBlock interleave(const DualPolBlock& even, const DualPolBlock& odd);

/// out[2i] = in[i], out[2i+1] = 0.
[[nodiscard]] CVec upsample_zero_insert(std::span<const cplx> symbols);
/// out[i] = in[2i + phase].
[[nodiscard]] CVec downsample2(std::span<const cplx> samples, std::size_t phase = 0);

/// Direct linear convolution, full length a.size() + b.size() - 1.
[[nodiscard]] CVec convolve(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace vqeq::signal

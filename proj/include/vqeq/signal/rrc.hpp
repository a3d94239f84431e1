#pragma once

#include <span>

#include "vqeq/types.hpp"

namespace vqeq::signal {

/// Unit-energy root-raised-cosine taps, span_symbols * sps + 1 long, centered.
[[nodiscard]] std::vector<double> rrc_taps(double rolloff, int span_symbols, int sps);

/// Zero-insertion upsample by sps and convolve with rrc_taps. The output has
/// symbols.size() * sps samples; the filter's group delay is removed so that
/// output[sps * i] is centered on symbol i.
[[nodiscard]] CVec rrc_shape(std::span<const cplx> symbols, double rolloff, int span_symbols, int sps);

/// Same-length centered filtering with real taps (used for matched filtering).
[[nodiscard]] CVec filter_centered(std::span<const cplx> x, std::span<const double> taps);

/// Frequency response of centered real taps on an n-point circular grid: the FFT of the taps
/// placed with their center at index 0. Multiplying a spectrum by this is a circular,
/// zero-delay filtering.
[[nodiscard]] CVec centered_frequency_response(std::span<const double> taps, std::size_t n);

}  // namespace vqeq::signal

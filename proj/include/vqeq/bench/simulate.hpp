#pragma once
// Transmit chain: i.i.d. symbols -> RRC pulse shaping (2 sps) -> fiber channel -> AWGN.
// Shaping and channel are applied circularly over the whole transmission in one FFT, so the
// symbol count is rounded up to a power of two.

#include <cstdint>

#include "vqeq/bench/config.hpp"

namespace vqeq::bench {

struct Transmission {
  DualPolBlock symbols;   // S per polarization
  DualPolBlock received;  // 2 * S samples per polarization
};

[[nodiscard]] std::size_t transmission_symbols(std::size_t n_symbols);

/// Symbols depend on the seed only; the noise realization on the seed only (scaled by snr_db).
[[nodiscard]] Transmission simulate_transmission(const ExperimentConfig& cfg, const modem::Constellation& c,
                                                 double snr_db, std::uint64_t seed, std::size_t n_symbols);

/// Circular RRC matched filter followed by symbol-rate sampling (phase 0).
[[nodiscard]] DualPolBlock matched_filter_symbols(const DualPolBlock& received, double rolloff, int span);

}  // namespace vqeq::bench

#include "vqeq/bench/simulate.hpp"

#include <bit>

#include "vqeq/rng.hpp"
#include "vqeq/signal/blocks.hpp"
#include "vqeq/signal/fft.hpp"
#include "vqeq/signal/rrc.hpp"

namespace vqeq::bench {

std::size_t transmission_symbols(std::size_t n_symbols) { return std::bit_ceil(std::max<std::size_t>(n_symbols, 2)); }

Transmission simulate_transmission(const ExperimentConfig& cfg, const modem::Constellation& c, double snr_db,
                                   std::uint64_t seed, std::size_t n_symbols) {
  const std::size_t s = transmission_symbols(n_symbols);
  const std::size_t n = 2 * s;
  Transmission t;
  t.symbols = DualPolBlock(modem::draw_symbols(c, s, derive_seed(seed, 0x5E1)),
                           modem::draw_symbols(c, s, derive_seed(seed, 0x5E2)));
  const CVec pulse = signal::centered_frequency_response(signal::rrc_taps(cfg.rrc_rolloff, cfg.rrc_span, 2), n);
  CVec sx = signal::fft(signal::upsample_zero_insert(t.symbols.x), n);
  CVec sy = signal::fft(signal::upsample_zero_insert(t.symbols.y), n);
  for (std::size_t k = 0; k < n; ++k) {
    sx[k] *= pulse[k];
    sy[k] *= pulse[k];
  }
  channel::apply_response_spectral(sx, sy, channel::build_channel_response(cfg.channel, n));
  const DualPolBlock clean(signal::ifft(sx, n), signal::ifft(sy, n));
  // Unit-power symbols through a unit-energy pulse: mean power per sample is 1 / sps.
  const double signal_power = c.mean_power() / 2.0;
  t.received = channel::add_awgn(clean, snr_db, signal_power, derive_seed(seed, 0xA36), 2);
  return t;
}

DualPolBlock matched_filter_symbols(const DualPolBlock& received, double rolloff, int span) {
  const std::size_t n = received.size();
  const CVec mf = signal::centered_frequency_response(signal::rrc_taps(rolloff, span, 2), n);
  DualPolBlock out;
  for (int p = 0; p < 2; ++p) {
    CVec spec = signal::fft(received.pol(p), n);
    for (std::size_t k = 0; k < n; ++k) spec[k] *= mf[k];
    out.pol(p) = signal::downsample2(signal::ifft(spec, n), 0);
  }
  return out;
}

}  // namespace vqeq::bench

#pragma once
// Linear dual-polarization fiber channel:
//
//   H(f) = R^T diag(exp(j pi tau f), exp(-j pi tau f)) R exp(-j 2 pi^2 beta L_cd f^2),
//   R = [[cos g, sin g], [-sin g, cos g]],  tau = D_pmd sqrt(L).
//
// plus circularly-symmetric white Gaussian noise.

#include <cstdint>
#include <limits>

#include "vqeq/types.hpp"

namespace vqeq::channel {

struct ChannelConfig {
  double gamma = 0.3141592653589793;  // rad
  double d_pmd = 0.05;                // ps / sqrt(km)
  double fiber_length_km = 1000.0;    // km
  double beta = -21.7;                // ps^2 / km
  double l_cd_km = 0.5;               // km
  double snr_db = 20.0;               // Es/N0 per polarization
  double symbol_rate_gbaud = 90.0;
  int sps = 2;

  void validate() const;
  /// Differential group delay in seconds.
  [[nodiscard]] double dgd_seconds() const;
  [[nodiscard]] double sample_rate_hz() const { return symbol_rate_gbaud * 1e9 * sps; }
};

struct FrequencyResponse2x2 {
  CVec h_xx, h_xy, h_yx, h_yy;
  std::vector<double> freq_hz;

  [[nodiscard]] std::size_t size() const noexcept { return freq_hz.size(); }
};

/// FFT-ordered frequency grid (0, df, ..., -df) spanning [-fs/2, fs/2).
[[nodiscard]] std::vector<double> fft_frequency_grid(std::size_t n, double sample_rate_hz);

/// H(f) on the n-point FFT grid at the configured sample rate.
[[nodiscard]] FrequencyResponse2x2 build_channel_response(const ChannelConfig& cfg, std::size_t fft_size);

/// H(f) at arbitrary frequencies.
[[nodiscard]] FrequencyResponse2x2 channel_response_at(const ChannelConfig& cfg, std::vector<double> freq_hz);

/// Applies H(f) to the whole waveform in one FFT (circular over the waveform length).
[[nodiscard]] DualPolBlock apply_channel(const DualPolBlock& tx, const FrequencyResponse2x2& resp);

/// Per-polarization spectra multiplied by the 2x2 response (in place on the spectra).
void apply_response_spectral(CVec& spec_x, CVec& spec_y, const FrequencyResponse2x2& resp);

inline constexpr double kNoiseOff = std::numeric_limits<double>::infinity();

/// Noise variance per complex sample (E|n|^2) for a target symbol-rate Es/N0.
///
/// With sps samples per symbol, signal_power is the mean per-sample power, so the symbol
/// energy is signal_power * sps. After a unit-energy matched filter the noise variance per
/// symbol is unchanged, which gives sigma^2 = signal_power * sps / 10^(snr_db / 10),
/// split equally over the real and imaginary parts.
[[nodiscard]] double noise_variance(double snr_db, double signal_power, int sps = 2);

/// Adds white Gaussian noise at snr_db (kNoiseOff disables it). Deterministic for a given seed;
/// x and y draw from independent streams.
[[nodiscard]] DualPolBlock add_awgn(const DualPolBlock& waveform, double snr_db, double signal_power,
                                    std::uint64_t rng_seed, int sps = 2);

}  // namespace vqeq::channel

#include "vqeq/channel/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "vqeq/rng.hpp"
#include "vqeq/signal/fft.hpp"

namespace vqeq::channel {

void ChannelConfig::validate() const {
  if (fiber_length_km < 0.0) throw ConfigError("channel: fiber_length_km must be >= 0");
  if (l_cd_km < 0.0) throw ConfigError("channel: l_cd_km must be >= 0");
  if (d_pmd < 0.0) throw ConfigError("channel: d_pmd must be >= 0");
  if (sps != 2) throw ConfigError("channel: sps must be 2");
  if (!(symbol_rate_gbaud > 0.0)) throw ConfigError("channel: symbol_rate_gbaud must be > 0");
}

double ChannelConfig::dgd_seconds() const { return d_pmd * std::sqrt(fiber_length_km) * 1e-12; }

std::vector<double> fft_frequency_grid(std::size_t n, double sample_rate_hz) {
  std::vector<double> f(n);
  const double df = sample_rate_hz / static_cast<double>(n);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t k = 0; k < n; ++k) {
    auto kk = static_cast<std::ptrdiff_t>(k);
    if (kk >= half) kk -= static_cast<std::ptrdiff_t>(n);
    f[k] = static_cast<double>(kk) * df;
  }
  return f;
}

FrequencyResponse2x2 channel_response_at(const ChannelConfig& cfg, std::vector<double> freq_hz) {
  cfg.validate();
  constexpr double pi = std::numbers::pi;
  const double tau = cfg.dgd_seconds();
  const double beta_lcd = cfg.beta * 1e-24 * cfg.l_cd_km;  // s^2
  const double c = std::cos(cfg.gamma), s = std::sin(cfg.gamma);

  FrequencyResponse2x2 h;
  const std::size_t n = freq_hz.size();
  h.h_xx.resize(n);
  h.h_xy.resize(n);
  h.h_yx.resize(n);
  h.h_yy.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = freq_hz[k];
    const cplx d1 = std::polar(1.0, pi * tau * f);
    const cplx d2 = std::polar(1.0, -pi * tau * f);
    const cplx cd = std::polar(1.0, -2.0 * pi * pi * beta_lcd * f * f);
    // R^T diag(d1, d2) R with R = [[c, s], [-s, c]]
    h.h_xx[k] = (c * c * d1 + s * s * d2) * cd;
    h.h_xy[k] = (c * s * d1 - s * c * d2) * cd;
    h.h_yx[k] = (s * c * d1 - c * s * d2) * cd;
    h.h_yy[k] = (s * s * d1 + c * c * d2) * cd;
  }
  h.freq_hz = std::move(freq_hz);
  return h;
}

FrequencyResponse2x2 build_channel_response(const ChannelConfig& cfg, std::size_t fft_size) {
  if (!is_power_of_two(fft_size)) throw ConfigError("build_channel_response: fft_size must be a power of two");
  return channel_response_at(cfg, fft_frequency_grid(fft_size, cfg.sample_rate_hz()));
}

void apply_response_spectral(CVec& spec_x, CVec& spec_y, const FrequencyResponse2x2& resp) {
  require_same_size(spec_x.size(), resp.size(), "apply_channel");
  require_same_size(spec_y.size(), resp.size(), "apply_channel");
  for (std::size_t k = 0; k < resp.size(); ++k) {
    const cplx ex = spec_x[k], ey = spec_y[k];
    spec_x[k] = resp.h_xx[k] * ex + resp.h_xy[k] * ey;
    spec_y[k] = resp.h_yx[k] * ex + resp.h_yy[k] * ey;
  }
}

DualPolBlock apply_channel(const DualPolBlock& tx, const FrequencyResponse2x2& resp) {
  require_same_size(tx.size(), resp.size(), "apply_channel");
  CVec sx = signal::fft(tx.x, tx.size());
  CVec sy = signal::fft(tx.y, tx.size());
  apply_response_spectral(sx, sy, resp);
  DualPolBlock out(signal::ifft(sx, sx.size()), signal::ifft(sy, sy.size()), tx.block_index);
  return out;
}

double noise_variance(double snr_db, double signal_power, int sps) {
  return signal_power * sps / std::pow(10.0, snr_db / 10.0);
}

DualPolBlock add_awgn(const DualPolBlock& waveform, double snr_db, double signal_power, std::uint64_t rng_seed,
                      int sps) {
  DualPolBlock out = waveform;
  if (std::isinf(snr_db) && snr_db > 0) return out;
  const double sigma = std::sqrt(noise_variance(snr_db, signal_power, sps) / 2.0);
  for (int p = 0; p < 2; ++p) {
    Rng rng(derive_seed(rng_seed, 0x4E015Eu + static_cast<std::uint64_t>(p)));
    std::normal_distribution<double> nd(0.0, sigma);
    for (auto& z : out.pol(p)) {
      const double re = nd(rng);
      const double im = nd(rng);
      z += cplx(re, im);
    }
  }
  return out;
}

}  // namespace vqeq::channel

#include "vqeq/signal/rrc.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vqeq/signal/fft.hpp"

namespace vqeq::signal {

std::vector<double> rrc_taps(double rolloff, int span_symbols, int sps) {
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ConfigError("rrc: rolloff must lie in (0, 1]");
  if (span_symbols <= 0 || span_symbols % 2 != 0) throw ConfigError("rrc: span_symbols must be positive and even");
  if (sps <= 0) throw ConfigError("rrc: sps must be positive");

  constexpr double pi = std::numbers::pi;
  const double b = rolloff;
  const int n = span_symbols * sps + 1;
  const int c = n / 2;
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - c) / sps;
    double v;
    if (std::abs(t) < 1e-12) {
      v = 1.0 - b + 4.0 * b / pi;
    } else if (std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-9) {
      v = b / std::numbers::sqrt2 *
          ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
    } else {
      v = (std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b))) /
          (pi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t)));
    }
    h[static_cast<std::size_t>(i)] = v;
  }
  double e = 0.0;
  for (double v : h) e += v * v;
  const double s = 1.0 / std::sqrt(e);
  for (double& v : h) v *= s;
  return h;
}

CVec filter_centered(std::span<const cplx> x, std::span<const double> taps) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto l = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t c = l / 2;
  CVec out(x.size());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    cplx acc{};
    for (std::ptrdiff_t k = 0; k < l; ++k) {
      const std::ptrdiff_t idx = t + c - k;
      if (idx >= 0 && idx < n) acc += taps[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(idx)];
    }
    out[static_cast<std::size_t>(t)] = acc;
  }
  return out;
}

CVec rrc_shape(std::span<const cplx> symbols, double rolloff, int span_symbols, int sps) {
  if (sps != 2) throw ConfigError("rrc_shape: only sps == 2 is supported");
  const auto taps = rrc_taps(rolloff, span_symbols, sps);
  CVec up(symbols.size() * static_cast<std::size_t>(sps));
  for (std::size_t i = 0; i < symbols.size(); ++i) up[i * static_cast<std::size_t>(sps)] = symbols[i];
  return filter_centered(up, taps);
}

CVec centered_frequency_response(std::span<const double> taps, std::size_t n) {
  if (taps.size() > n) throw ShapeError("centered_frequency_response: more taps than grid points");
  const std::size_t c = taps.size() / 2;
  CVec h(n);
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const std::size_t idx = (k + n - c) % n;
    h[idx] += taps[k];
  }
  return fft(h, n);
}

}  // namespace vqeq::signal

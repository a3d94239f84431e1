#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "vqeq/channel/channel.hpp"

using namespace vqeq;
using namespace vqeq::channel;
using testing::max_abs_diff;

namespace {

ChannelConfig off() {
  ChannelConfig c;
  c.gamma = 0;
  c.d_pmd = 0;
  c.l_cd_km = 0;
  return c;
}

}  // namespace

TEST_CASE("frequency grid is FFT ordered") {
  const auto f = fft_frequency_grid(8, 8.0);
  const std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
  for (std::size_t i = 0; i < 8; ++i) CHECK(f[i] == doctest::Approx(expect[i]));
}

TEST_CASE("all impairments off gives the identity") {
  const auto h = build_channel_response(off(), 256);
  for (std::size_t k = 0; k < h.size(); ++k) {
    CHECK(std::abs(h.h_xx[k] - 1.0) < 1e-12);
    CHECK(std::abs(h.h_yy[k] - 1.0) < 1e-12);
    CHECK(std::abs(h.h_xy[k]) < 1e-12);
    CHECK(std::abs(h.h_yx[k]) < 1e-12);
  }
  const DualPolBlock x = testing::random_block(256, 3);
  CHECK(max_abs_diff(apply_channel(x, h), x) < 1e-12);
}

TEST_CASE("without CD the response is unitary with unit determinant") {
  for (double gamma : {0.0, 0.3, std::numbers::pi / 4, 1.3}) {
    ChannelConfig c;
    c.gamma = gamma;
    c.l_cd_km = 0;
    c.d_pmd = 2.0;  // large DGD so the phases wrap
    const auto h = build_channel_response(c, 512);
    for (std::size_t k = 0; k < h.size(); ++k) {
      // H^H H == I
      const cplx a = std::conj(h.h_xx[k]) * h.h_xx[k] + std::conj(h.h_yx[k]) * h.h_yx[k];
      const cplx b = std::conj(h.h_xx[k]) * h.h_xy[k] + std::conj(h.h_yx[k]) * h.h_yy[k];
      const cplx d = std::conj(h.h_xy[k]) * h.h_xy[k] + std::conj(h.h_yy[k]) * h.h_yy[k];
      CHECK(std::abs(a - 1.0) < 1e-12);
      CHECK(std::abs(b) < 1e-12);
      CHECK(std::abs(d - 1.0) < 1e-12);
      CHECK(std::abs(std::abs(h.h_xx[k] * h.h_yy[k] - h.h_xy[k] * h.h_yx[k]) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("pure DGD is diagonal with phase +pi tau f") {
  ChannelConfig c = off();
  c.d_pmd = 0.2;
  const double tau = c.dgd_seconds();
  CHECK(tau == doctest::Approx(0.2 * std::sqrt(1000.0) * 1e-12));
  const auto h = build_channel_response(c, 128);
  for (std::size_t k = 0; k < h.size(); ++k) {
    CHECK(std::abs(h.h_xy[k]) < 1e-15);
    CHECK(std::abs(h.h_yx[k]) < 1e-15);
    CHECK(std::abs(h.h_xx[k]) == doctest::Approx(1.0));
    const cplx expect = std::polar(1.0, std::numbers::pi * tau * h.freq_hz[k]);
    CHECK(std::abs(h.h_xx[k] - expect) < 1e-12);
    CHECK(std::abs(h.h_yy[k] - std::conj(expect)) < 1e-12);
  }
}

TEST_CASE("rotation by pi/2 without DGD matches the direct matrix product") {
  ChannelConfig c = off();
  c.gamma = std::numbers::pi / 2;
  const auto h = channel_response_at(c, {0.0, 1e9, -3e10});
  // R = [[0, 1], [-1, 0]]; R^T I R = I.
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(h.h_xx[k] - 1.0) < 1e-12);
    CHECK(std::abs(h.h_yy[k] - 1.0) < 1e-12);
    CHECK(std::abs(h.h_xy[k]) < 1e-12);
  }
  // With DGD the rotation swaps which axis leads: H = diag(e^{-j phi}, e^{j phi}).
  c.d_pmd = 0.2;
  const double f = 2e10;
  const auto g = channel_response_at(c, {f});
  const double phi = std::numbers::pi * c.dgd_seconds() * f;
  CHECK(std::abs(g.h_xx[0] - std::polar(1.0, -phi)) < 1e-12);
  CHECK(std::abs(g.h_yy[0] - std::polar(1.0, phi)) < 1e-12);
}

TEST_CASE("chromatic dispersion is a common all-pass quadratic phase") {
  ChannelConfig c = off();
  c.l_cd_km = 4.0;
  const auto h = channel_response_at(c, {0.0, 4.5e10});
  CHECK(std::abs(h.h_xx[0] - 1.0) < 1e-12);
  const double phase = -2.0 * std::numbers::pi * std::numbers::pi * (-21.7e-24) * 4.0 * 4.5e10 * 4.5e10;
  CHECK(std::abs(h.h_xx[1] - std::polar(1.0, phase)) < 1e-12);
  CHECK(std::abs(h.h_yy[1] - std::polar(1.0, phase)) < 1e-12);
}

TEST_CASE("apply_channel preserves energy") {
  const DualPolBlock x = testing::random_block(1024, 9);
  double e0 = 0;
  for (int p = 0; p < 2; ++p)
    for (auto z : x.pol(p)) e0 += std::norm(z);
  for (double l_cd : {0.0, 1.0, 4.0}) {
    ChannelConfig c;
    c.l_cd_km = l_cd;
    const DualPolBlock y = apply_channel(x, build_channel_response(c, 1024));
    double e1 = 0;
    for (int p = 0; p < 2; ++p)
      for (auto z : y.pol(p)) e1 += std::norm(z);
    CHECK(std::abs(e1 - e0) / e0 < 1e-9);
  }
}

TEST_CASE("channel config validation") {
  ChannelConfig c;
  CHECK_NOTHROW(c.validate());
  c.l_cd_km = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS((void)build_channel_response(ChannelConfig{}, 100), ConfigError);
  CHECK_THROWS_AS((void)apply_channel(DualPolBlock(8), build_channel_response(ChannelConfig{}, 16)), ShapeError);
}

TEST_CASE("AWGN: disabled, deterministic, calibrated") {
  const std::size_t n = 1000000;
  const DualPolBlock x{CVec(n), CVec(n)};
  CHECK(max_abs_diff(add_awgn(x, kNoiseOff, 0.5, 1), x) == 0.0);
  const DualPolBlock a = add_awgn(x, 18.0, 0.5, 7), b = add_awgn(x, 18.0, 0.5, 7);
  CHECK(max_abs_diff(a, b) == 0.0);
  // Signal power 0.5 per sample at 2 sps: Es = 1, so E|n|^2 = 10^(-1.8).
  for (int p = 0; p < 2; ++p) {
    double e = 0, re = 0;
    for (auto z : a.pol(p)) {
      e += std::norm(z);
      re += z.real() * z.real();
    }
    const double var = e / static_cast<double>(n);
    const double snr_measured = 10 * std::log10(0.5 * 2 / var);
    CHECK(std::abs(snr_measured - 18.0) < 0.05);
    CHECK(re / e == doctest::Approx(0.5).epsilon(0.01));
  }
  // x and y are independent streams.
  cplx corr{};
  for (std::size_t i = 0; i < n; ++i) corr += a.x[i] * std::conj(a.y[i]);
  CHECK(std::abs(corr) / static_cast<double>(n) / noise_variance(18.0, 0.5) < 0.01);
  const DualPolBlock c2 = add_awgn(x, 18.0, 0.5, 8);
  CHECK(max_abs_diff(a, c2) > 0.0);
}

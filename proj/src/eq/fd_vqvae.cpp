#include "vqeq/eq/fd_vqvae.hpp"

#include "vqeq/signal/blocks.hpp"
#include "vqeq/signal/fft.hpp"
#include "vqeq/simd/kernels.hpp"

namespace vqeq::eq {
namespace {

// [prev, cur] -> FFT
CVec window_spectrum(const CVec& prev, const CVec& cur) {
  CVec w(prev.size() + cur.size());
  std::copy(prev.begin(), prev.end(), w.begin());
  std::copy(cur.begin(), cur.end(), w.begin() + static_cast<std::ptrdiff_t>(prev.size()));
  signal::fft_into(w, w);
  return w;
}

// [0 ... 0, err] -> FFT, with `lead` zeros.
CVec padded_error_spectrum(const CVec& err, std::size_t lead) {
  CVec w(lead + err.size());
  std::copy(err.begin(), err.end(), w.begin() + static_cast<std::ptrdiff_t>(lead));
  signal::fft_into(w, w);
  return w;
}

}  // namespace

FdVqVaeEqualizer::FdVqVaeEqualizer(const TrainConfig& cfg, modem::Constellation c)
    : VqVaeEqualizer(cfg, std::move(c), 8 * cfg.n_tap_fd, 4 * cfg.n_tap_enc),
      half_(cfg.block_size / 2),
      prev_even_(cfg.block_size / 2),
      prev_odd_(cfg.block_size / 2),
      prev_up_(cfg.block_size) {
  auto p = mutable_params();
  const std::size_t l = cfg_.n_tap_fd, le = cfg_.n_tap_enc;
  p[decoder_filter(even, 0, 0) * l + cfg_.decoder_center()] = 1.0;
  p[decoder_filter(even, 1, 1) * l + cfg_.decoder_center()] = 1.0;
  p[n_dec_ + encoder_filter(0, 0) * le + cfg_.encoder_center()] = 1.0;
  p[n_dec_ + encoder_filter(1, 1) * le + cfg_.encoder_center()] = 1.0;
  on_params_changed();
}

std::span<const cplx> FdVqVaeEqualizer::decoder_taps(int path, int p, int q) const {
  return params().subspan(decoder_filter(path, p, q) * cfg_.n_tap_fd, cfg_.n_tap_fd);
}

std::span<const cplx> FdVqVaeEqualizer::encoder_taps(int p, int q) const {
  return params().subspan(n_dec_ + encoder_filter(p, q) * cfg_.n_tap_enc, cfg_.n_tap_enc);
}

void FdVqVaeEqualizer::on_params_changed() {
  const std::size_t n = cfg_.block_size;
  for (int path = 0; path < 2; ++path)
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) dec_fd_[decoder_filter(path, p, q)] = signal::fft_zero_padded(decoder_taps(path, p, q), n);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) enc_fd_[encoder_filter(p, q)] = signal::fft_zero_padded(encoder_taps(p, q), 2 * n);
}

DualPolBlock FdVqVaeEqualizer::decoder_forward(const DualPolBlock& r) {
  require_same_size(r.size(), cfg_.block_size, "decoder_forward");
  const std::size_t n = cfg_.block_size;
  auto [even_blk, odd_blk] = signal::split_even_odd(r);
  for (int q = 0; q < 2; ++q) {
    dec_spec_[even][static_cast<std::size_t>(q)] = window_spectrum(prev_even_.pol(q), even_blk.pol(q));
    dec_spec_[odd][static_cast<std::size_t>(q)] = window_spectrum(prev_odd_.pol(q), odd_blk.pol(q));
  }
  DualPolBlock u(half_);
  u.block_index = r.block_index;
  CVec acc(n);
  for (int p = 0; p < 2; ++p) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (int path = 0; path < 2; ++path)
      for (int q = 0; q < 2; ++q)
        simd::cmul_acc(acc, dec_fd_[decoder_filter(path, p, q)], dec_spec_[static_cast<std::size_t>(path)][static_cast<std::size_t>(q)]);
    signal::ifft_into(acc, acc);
    std::copy(acc.begin() + static_cast<std::ptrdiff_t>(half_), acc.end(), u.pol(p).begin());
  }
  prev_even_ = std::move(even_blk);
  prev_odd_ = std::move(odd_blk);
  last_u_tilde_ = u;
  has_dec_pass_ = true;
  return u;
}

DualPolBlock FdVqVaeEqualizer::encoder_forward(const DualPolBlock& u_hat) {
  require_same_size(u_hat.size(), half_, "encoder_forward");
  const std::size_t n = cfg_.block_size;
  DualPolBlock up(n);
  for (int q = 0; q < 2; ++q) {
    up.pol(q) = signal::upsample_zero_insert(u_hat.pol(q));
    enc_spec_[static_cast<std::size_t>(q)] = window_spectrum(prev_up_.pol(q), up.pol(q));
  }
  DualPolBlock r_tilde(n);
  r_tilde.block_index = u_hat.block_index;
  CVec acc(2 * n);
  for (int p = 0; p < 2; ++p) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (int q = 0; q < 2; ++q) simd::cmul_acc(acc, enc_fd_[encoder_filter(p, q)], enc_spec_[static_cast<std::size_t>(q)]);
    signal::ifft_into(acc, acc);
    std::copy(acc.begin() + static_cast<std::ptrdiff_t>(n), acc.end(), r_tilde.pol(p).begin());
  }
  prev_up_ = std::move(up);
  last_r_tilde_ = r_tilde;
  has_enc_pass_ = true;
  return r_tilde;
}

// grad[m] = sum_n err[n] conj(window[half + n - m]) is a circular cross-correlation of the
// zero-led error with the window: the first taps of ifft(fft([0, err]) * conj(fft(window))).
void FdVqVaeEqualizer::decoder_gradient(const DualPolBlock& err, std::span<cplx> out) const {
  require_same_size(err.size(), half_, "decoder_gradient");
  const std::size_t n = cfg_.block_size, l = cfg_.n_tap_fd;
  CVec tmp(n);
  for (int p = 0; p < 2; ++p) {
    const CVec e_spec = padded_error_spectrum(err.pol(p), half_);
    for (int path = 0; path < 2; ++path)
      for (int q = 0; q < 2; ++q) {
        simd::cmul_conj(tmp, e_spec, dec_spec_[static_cast<std::size_t>(path)][static_cast<std::size_t>(q)]);
        signal::ifft_into(tmp, tmp);
        std::copy_n(tmp.begin(), l, out.begin() + static_cast<std::ptrdiff_t>(decoder_filter(path, p, q) * l));
      }
  }
}

void FdVqVaeEqualizer::encoder_gradient(const DualPolBlock& err, std::span<cplx> out) const {
  const std::size_t n = cfg_.block_size, le = cfg_.n_tap_enc;
  require_same_size(err.size(), n, "encoder_gradient");
  CVec tmp(2 * n);
  for (int p = 0; p < 2; ++p) {
    const CVec e_spec = padded_error_spectrum(err.pol(p), n);
    for (int q = 0; q < 2; ++q) {
      simd::cmul_conj(tmp, e_spec, enc_spec_[static_cast<std::size_t>(q)]);
      signal::ifft_into(tmp, tmp);
      std::copy_n(tmp.begin(), le, out.begin() + static_cast<std::ptrdiff_t>(encoder_filter(p, q) * le));
    }
  }
}

// d/d conj(u_hat_q[i]) = sum_p sum_t err_p[t] conj(g_pq[t - 2i]): correlation of the zero-led
// error with each encoder filter, read at the positions of the current decisions.
DualPolBlock FdVqVaeEqualizer::encoder_input_gradient(const DualPolBlock& err) const {
  const std::size_t n = cfg_.block_size;
  require_same_size(err.size(), n, "encoder_input_gradient");
  const std::array<CVec, 2> e_spec{padded_error_spectrum(err.x, n), padded_error_spectrum(err.y, n)};
  DualPolBlock d(half_);
  CVec acc(2 * n), tmp(2 * n);
  for (int q = 0; q < 2; ++q) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (int p = 0; p < 2; ++p) {
      simd::cmul_conj(tmp, e_spec[static_cast<std::size_t>(p)], enc_fd_[encoder_filter(p, q)]);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += tmp[k];
    }
    signal::ifft_into(acc, acc);
    for (std::size_t i = 0; i < half_; ++i) d.pol(q)[i] = acc[n + 2 * i];
  }
  return d;
}

std::array<CVec, 4> FdVqVaeEqualizer::equivalent_td_decoder_taps() const {
  const std::size_t n = cfg_.block_size, l = cfg_.n_tap_fd;
  std::array<CVec, 4> w;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      const CVec he = signal::ifft(decoder_fd_filter(even, p, q), n);
      const CVec ho = signal::ifft(decoder_fd_filter(odd, p, q), n);
      CVec& arm = w[static_cast<std::size_t>(p * 2 + q)];
      arm.assign(2 * l, cplx{});
      for (std::size_t m = 0; m < l; ++m) {
        arm[2 * m + 1] = he[m];
        arm[2 * m] = ho[m];
      }
    }
  return w;
}

void FdVqVaeEqualizer::save_buffers(nlohmann::json& j) const {
  j["prev_even"] = {cvec_to_json(prev_even_.x), cvec_to_json(prev_even_.y)};
  j["prev_odd"] = {cvec_to_json(prev_odd_.x), cvec_to_json(prev_odd_.y)};
  j["prev_upsampled"] = {cvec_to_json(prev_up_.x), cvec_to_json(prev_up_.y)};
}

void FdVqVaeEqualizer::load_buffers(const nlohmann::json& j) {
  auto load = [](const nlohmann::json& a) { return DualPolBlock(cvec_from_json(a.at(0)), cvec_from_json(a.at(1))); };
  prev_even_ = load(j.at("prev_even"));
  prev_odd_ = load(j.at("prev_odd"));
  prev_up_ = load(j.at("prev_upsampled"));
  has_dec_pass_ = has_enc_pass_ = false;
}

}  // namespace vqeq::eq

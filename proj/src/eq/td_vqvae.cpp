#include "vqeq/eq/td_vqvae.hpp"

#include "vqeq/signal/blocks.hpp"
#include "vqeq/simd/kernels.hpp"

namespace vqeq::eq {
namespace {

CVec join(const CVec& a, const CVec& b) {
  CVec w(a);
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

}  // namespace

TdVqVaeEqualizer::TdVqVaeEqualizer(const TrainConfig& cfg, modem::Constellation c)
    : VqVaeEqualizer(cfg, std::move(c), 8 * cfg.n_tap_fd, 4 * cfg.n_tap_enc),
      k_(2 * cfg.n_tap_fd),
      prev_r_(cfg.block_size),
      prev_up_(cfg.block_size) {
  auto p = mutable_params();
  const std::size_t spike = 2 * cfg_.decoder_center() + 1;
  p[arm(0, 0) * k_ + spike] = 1.0;
  p[arm(1, 1) * k_ + spike] = 1.0;
  p[n_dec_ + arm(0, 0) * cfg_.n_tap_enc + cfg_.encoder_center()] = 1.0;
  p[n_dec_ + arm(1, 1) * cfg_.n_tap_enc + cfg_.encoder_center()] = 1.0;
  on_params_changed();
}

std::span<const cplx> TdVqVaeEqualizer::decoder_taps(int p, int q) const { return params().subspan(arm(p, q) * k_, k_); }

std::span<const cplx> TdVqVaeEqualizer::encoder_taps(int p, int q) const {
  return params().subspan(n_dec_ + arm(p, q) * cfg_.n_tap_enc, cfg_.n_tap_enc);
}

void TdVqVaeEqualizer::set_decoder_taps(const std::array<CVec, 4>& w) {
  CVec p(params().begin(), params().end());
  for (std::size_t a = 0; a < 4; ++a) {
    require_same_size(w[a].size(), k_, "set_decoder_taps");
    std::copy(w[a].begin(), w[a].end(), p.begin() + static_cast<std::ptrdiff_t>(a * k_));
  }
  set_params(p);
}

void TdVqVaeEqualizer::on_params_changed() {
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      const auto d = decoder_taps(p, q);
      dec_rev_[arm(p, q)].assign(d.rbegin(), d.rend());
      const auto e = encoder_taps(p, q);
      enc_rev_[arm(p, q)].assign(e.rbegin(), e.rend());
    }
}

DualPolBlock TdVqVaeEqualizer::decoder_forward(const DualPolBlock& r) {
  const std::size_t n = cfg_.block_size, half = n / 2;
  require_same_size(r.size(), n, "decoder_forward");
  for (int q = 0; q < 2; ++q) dec_win_[static_cast<std::size_t>(q)] = join(prev_r_.pol(q), r.pol(q));
  DualPolBlock u(half);
  u.block_index = r.block_index;
  for (int p = 0; p < 2; ++p)
    for (std::size_t i = 0; i < half; ++i) {
      // Window index of r[2i + 1 - j] is n + 2i + 1 - j; j runs backwards over the reversed taps.
      const std::size_t start = n + 2 * i + 2 - k_;
      cplx acc{};
      for (int q = 0; q < 2; ++q)
        acc += simd::dot(dec_rev_[arm(p, q)], std::span<const cplx>(dec_win_[static_cast<std::size_t>(q)]).subspan(start, k_));
      u.pol(p)[i] = acc;
    }
  prev_r_ = DualPolBlock(r.x, r.y, r.block_index);
  last_u_tilde_ = u;
  has_dec_pass_ = true;
  return u;
}

DualPolBlock TdVqVaeEqualizer::encoder_forward(const DualPolBlock& u_hat) {
  const std::size_t n = cfg_.block_size, le = cfg_.n_tap_enc;
  require_same_size(u_hat.size(), n / 2, "encoder_forward");
  DualPolBlock up(n);
  for (int q = 0; q < 2; ++q) {
    up.pol(q) = signal::upsample_zero_insert(u_hat.pol(q));
    enc_win_[static_cast<std::size_t>(q)] = join(prev_up_.pol(q), up.pol(q));
  }
  DualPolBlock r_tilde(n);
  r_tilde.block_index = u_hat.block_index;
  for (int p = 0; p < 2; ++p)
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t start = n + t + 1 - le;
      cplx acc{};
      for (int q = 0; q < 2; ++q)
        acc += simd::dot(enc_rev_[arm(p, q)], std::span<const cplx>(enc_win_[static_cast<std::size_t>(q)]).subspan(start, le));
      r_tilde.pol(p)[t] = acc;
    }
  prev_up_ = std::move(up);
  last_r_tilde_ = r_tilde;
  has_enc_pass_ = true;
  return r_tilde;
}

void TdVqVaeEqualizer::decoder_gradient(const DualPolBlock& err, std::span<cplx> out) const {
  const std::size_t n = cfg_.block_size, half = n / 2;
  require_same_size(err.size(), half, "decoder_gradient");
  CVec rev(k_);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      std::fill(rev.begin(), rev.end(), cplx{});
      const std::span<const cplx> win(dec_win_[static_cast<std::size_t>(q)]);
      for (std::size_t i = 0; i < half; ++i) simd::axpy_conj(rev, err.pol(p)[i], win.subspan(n + 2 * i + 2 - k_, k_));
      auto dst = out.begin() + static_cast<std::ptrdiff_t>(arm(p, q) * k_);
      std::copy(rev.rbegin(), rev.rend(), dst);
    }
}

void TdVqVaeEqualizer::encoder_gradient(const DualPolBlock& err, std::span<cplx> out) const {
  const std::size_t n = cfg_.block_size, le = cfg_.n_tap_enc;
  require_same_size(err.size(), n, "encoder_gradient");
  CVec rev(le);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      std::fill(rev.begin(), rev.end(), cplx{});
      const std::span<const cplx> win(enc_win_[static_cast<std::size_t>(q)]);
      for (std::size_t t = 0; t < n; ++t) simd::axpy_conj(rev, err.pol(p)[t], win.subspan(n + t + 1 - le, le));
      std::copy(rev.rbegin(), rev.rend(), out.begin() + static_cast<std::ptrdiff_t>(arm(p, q) * le));
    }
}

DualPolBlock TdVqVaeEqualizer::encoder_input_gradient(const DualPolBlock& err) const {
  const std::size_t n = cfg_.block_size, le = cfg_.n_tap_enc;
  require_same_size(err.size(), n, "encoder_input_gradient");
  DualPolBlock d(n / 2);
  for (int q = 0; q < 2; ++q)
    for (std::size_t i = 0; i < n / 2; ++i) {
      cplx acc{};
      for (int p = 0; p < 2; ++p) {
        const auto g = encoder_taps(p, q);
        for (std::size_t m = 0; m < le && 2 * i + m < n; ++m) acc += err.pol(p)[2 * i + m] * std::conj(g[m]);
      }
      d.pol(q)[i] = acc;
    }
  return d;
}

void TdVqVaeEqualizer::save_buffers(nlohmann::json& j) const {
  j["prev_r"] = {cvec_to_json(prev_r_.x), cvec_to_json(prev_r_.y)};
  j["prev_upsampled"] = {cvec_to_json(prev_up_.x), cvec_to_json(prev_up_.y)};
}

void TdVqVaeEqualizer::load_buffers(const nlohmann::json& j) {
  auto load = [](const nlohmann::json& a) { return DualPolBlock(cvec_from_json(a.at(0)), cvec_from_json(a.at(1))); };
  prev_r_ = load(j.at("prev_r"));
  prev_up_ = load(j.at("prev_upsampled"));
  has_dec_pass_ = has_enc_pass_ = false;
}

DualPolBlock td_butterfly(const std::array<CVec, 4>& taps, const DualPolBlock& r, std::ptrdiff_t offset,
                          std::size_t n_out) {
  DualPolBlock out(n_out);
  const auto len = static_cast<std::ptrdiff_t>(r.size());
  for (int p = 0; p < 2; ++p)
    for (std::size_t n = 0; n < n_out; ++n) {
      cplx acc{};
      for (int q = 0; q < 2; ++q) {
        const CVec& w = taps[static_cast<std::size_t>(p * 2 + q)];
        for (std::size_t j = 0; j < w.size(); ++j) {
          const std::ptrdiff_t idx = 2 * static_cast<std::ptrdiff_t>(n) + 1 - static_cast<std::ptrdiff_t>(j) + offset;
          if (idx >= 0 && idx < len) acc += w[j] * r.pol(q)[static_cast<std::size_t>(idx)];
        }
      }
      out.pol(p)[n] = acc;
    }
  return out;
}

}  // namespace vqeq::eq

#pragma once
// Time-domain VQ-VAE equalizer with the same training contract as FdVqVaeEqualizer.
//
// Decoder: a fractionally spaced 2x2 butterfly with 2 * n_tap_fd taps per arm,
//   u_p[n] = sum_q sum_j w_pq[j] r_q[2n + 1 - j],
// which has the same degrees of freedom as the FD even/odd pair (w[2m + 1] = even[m],
// w[2m] = odd[m]). Encoder: r_tilde_p[t] = sum_q sum_m g_pq[m] v_q[t - m] on the zero-inserted
// decisions v.

#include <array>

#include "vqeq/eq/vqvae.hpp"

namespace vqeq::eq {

class TdVqVaeEqualizer final : public VqVaeEqualizer {
 public:
  TdVqVaeEqualizer(const TrainConfig& cfg, modem::Constellation c);

  DualPolBlock decoder_forward(const DualPolBlock& r) override;
  DualPolBlock encoder_forward(const DualPolBlock& u_hat) override;

  [[nodiscard]] std::string kind() const override { return "td_vqvae"; }
  [[nodiscard]] std::unique_ptr<BlockEqualizer> clone() const override {
    return std::make_unique<TdVqVaeEqualizer>(*this);
  }

  [[nodiscard]] static constexpr std::size_t arm(int p, int q) noexcept { return static_cast<std::size_t>(p * 2 + q); }
  [[nodiscard]] std::span<const cplx> decoder_taps(int p, int q) const;
  [[nodiscard]] std::span<const cplx> encoder_taps(int p, int q) const;
  /// Replaces the decoder arms (each 2 * n_tap_fd long); encoder taps are kept.
  void set_decoder_taps(const std::array<CVec, 4>& w);

 protected:
  void decoder_gradient(const DualPolBlock& err, std::span<cplx> out) const override;
  void encoder_gradient(const DualPolBlock& err, std::span<cplx> out) const override;
  [[nodiscard]] DualPolBlock encoder_input_gradient(const DualPolBlock& err) const override;
  void on_params_changed() override;
  [[nodiscard]] bool has_intermediates() const override { return has_dec_pass_ && has_enc_pass_; }
  void save_buffers(nlohmann::json& j) const override;
  void load_buffers(const nlohmann::json& j) override;

 private:
  std::size_t k_;  // decoder taps per arm
  // Reversed taps so each output is a contiguous dot product.
  std::array<CVec, 4> dec_rev_, enc_rev_;
  DualPolBlock prev_r_, prev_up_;
  // [prev, cur] windows of the last pass.
  std::array<CVec, 2> dec_win_, enc_win_;
  bool has_dec_pass_ = false;
  bool has_enc_pass_ = false;
};

/// Fractionally spaced TD butterfly over a 2 sps stream:
///   out_p[n] = sum_q sum_j taps[p*2+q][j] r_q[2n + 1 - j + offset], n = 0 .. n_out-1,
/// reading zeros outside r. Used as an independent reference in tests and by the baselines.
[[nodiscard]] DualPolBlock td_butterfly(const std::array<CVec, 4>& taps, const DualPolBlock& r, std::ptrdiff_t offset,
                                        std::size_t n_out);

}  // namespace vqeq::eq

#pragma once
// Frequency-domain VQ-VAE equalizer.
//
// Decoder: each block of N samples is split into even and odd half-blocks of N/2. Each
// half-block is joined to its predecessor, transformed with an N-point FFT and passed through a
// 2x2 butterfly of FD filters (eight filters in total: even/odd x {xx, xy, yx, yy}). The even
// and odd butterflies are summed per polarization and the last N/2 samples of the IFFT are the
// symbol-rate output. Encoder: decisions are upsampled by zero insertion, joined to the previous
// upsampled block, and filtered by a 2x2 butterfly with 2N-point FFTs; the last N samples are
// the reconstruction.
//
// Trainable parameters are the time-domain taps; the FD filters are their zero-padded FFTs and
// are refreshed after every update.

#include <array>

#include "vqeq/eq/vqvae.hpp"

namespace vqeq::eq {

class FdVqVaeEqualizer final : public VqVaeEqualizer {
 public:
  enum Path { even = 0, odd = 1 };

  FdVqVaeEqualizer(const TrainConfig& cfg, modem::Constellation c);

  DualPolBlock decoder_forward(const DualPolBlock& r) override;
  DualPolBlock encoder_forward(const DualPolBlock& u_hat) override;

  [[nodiscard]] std::string kind() const override { return "fd_vqvae"; }
  [[nodiscard]] std::unique_ptr<BlockEqualizer> clone() const override {
    return std::make_unique<FdVqVaeEqualizer>(*this);
  }

  /// Parameter-layout index of decoder filter (path, out pol p, in pol q).
  [[nodiscard]] static constexpr std::size_t decoder_filter(int path, int p, int q) noexcept {
    return static_cast<std::size_t>(path * 4 + p * 2 + q);
  }
  [[nodiscard]] static constexpr std::size_t encoder_filter(int p, int q) noexcept {
    return static_cast<std::size_t>(p * 2 + q);
  }
  [[nodiscard]] std::span<const cplx> decoder_taps(int path, int p, int q) const;
  [[nodiscard]] std::span<const cplx> encoder_taps(int p, int q) const;
  [[nodiscard]] const CVec& decoder_fd_filter(int path, int p, int q) const {
    return dec_fd_[decoder_filter(path, p, q)];
  }
  [[nodiscard]] const CVec& encoder_fd_filter(int p, int q) const { return enc_fd_[encoder_filter(p, q)]; }

  /// Fractionally spaced TD butterfly taps (2 * n_tap_fd per arm) equivalent to the current FD
  /// decoder, recovered from the IFFT of the FD filters: w[2m + 1] = even[m], w[2m] = odd[m].
  [[nodiscard]] std::array<CVec, 4> equivalent_td_decoder_taps() const;

 protected:
  void decoder_gradient(const DualPolBlock& err, std::span<cplx> out) const override;
  void encoder_gradient(const DualPolBlock& err, std::span<cplx> out) const override;
  [[nodiscard]] DualPolBlock encoder_input_gradient(const DualPolBlock& err) const override;
  void on_params_changed() override;
  [[nodiscard]] bool has_intermediates() const override { return has_dec_pass_ && has_enc_pass_; }
  void save_buffers(nlohmann::json& j) const override;
  void load_buffers(const nlohmann::json& j) override;

 private:
  std::size_t half_;  // N/2
  std::array<CVec, 8> dec_fd_;
  std::array<CVec, 4> enc_fd_;
  // Previous even/odd half-blocks and previous upsampled decisions.
  DualPolBlock prev_even_, prev_odd_, prev_up_;
  // Spectra of the last decoder windows [path][q] and encoder windows [q].
  std::array<std::array<CVec, 2>, 2> dec_spec_;
  std::array<CVec, 2> enc_spec_;
  bool has_dec_pass_ = false;
  bool has_enc_pass_ = false;
};

}  // namespace vqeq::eq

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

namespace vqeq::eq {

enum class TrainMode { vqvae, decision_directed };

/// How the reconstruction term reaches the decoder through the quantizer.
///   stop_gradient    - u_hat is a constant; the decoder only sees the decision-pull term.
///   straight_through - the gradient of the reconstruction term w.r.t. u_hat is copied onto
///                      u_tilde (identity through the quantizer), as in standard VQ-VAE training.
enum class GradientEstimator { straight_through, stop_gradient };

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  double rho = 0.5;
  double learning_rate = 8e-4;
  AdamConfig adam;
  std::size_t block_size = 32;  // N: samples per block at 2 sps
  std::size_t n_tap_fd = 16;    // taps per even/odd sub-filter (TD equivalent: 2 * n_tap_fd)
  std::size_t n_tap_enc = 32;   // encoder taps at 2 sps
  TrainMode mode = TrainMode::vqvae;
  GradientEstimator gradient = GradientEstimator::straight_through;

  void validate() const;
  [[nodiscard]] double effective_rho() const noexcept { return mode == TrainMode::decision_directed ? 1.0 : rho; }
  [[nodiscard]] std::size_t symbols_per_block() const noexcept { return block_size / 2; }
  [[nodiscard]] std::size_t n_tap_td() const noexcept { return 2 * n_tap_fd; }
  /// Index of the initial spike in the even sub-filters; the decoder then outputs symbol n - center.
  [[nodiscard]] std::size_t decoder_center() const noexcept { return n_tap_fd / 2; }
  [[nodiscard]] std::size_t encoder_center() const noexcept { return n_tap_enc / 2; }
  /// Samples by which the reconstruction target lags the current block. The decoder delays
  /// symbols by decoder_center() (2 * decoder_center() samples) and the encoder's initial spike
  /// adds encoder_center() more, so r_tilde(k) lines up with r delayed by their sum.
  [[nodiscard]] std::size_t reconstruction_delay() const noexcept {
    return 2 * decoder_center() + encoder_center();
  }
  /// Leading blocks whose decoder window, encoder input or reconstruction target still
  /// contain the zero-filled start-up history. No taps are adapted on these.
  [[nodiscard]] std::size_t warmup_blocks() const noexcept {
    const std::size_t span = std::max(2 * n_tap_fd + n_tap_enc - 2, reconstruction_delay());
    return (span + block_size - 1) / block_size;
  }
};

[[nodiscard]] std::string to_string(TrainMode m);
[[nodiscard]] std::string to_string(GradientEstimator g);
[[nodiscard]] TrainMode train_mode_from_string(const std::string& s);
[[nodiscard]] GradientEstimator gradient_estimator_from_string(const std::string& s);

}  // namespace vqeq::eq

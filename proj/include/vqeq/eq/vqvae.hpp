#pragma once
// Blind VQ-VAE equalizer: a linear butterfly decoder (the equalizer) followed by a MAP
// quantizer onto the constellation, and a linear butterfly encoder that re-synthesizes the
// channel observations from the decisions. Training minimizes
//
//   l = (1 - rho) ||r - r_tilde||^2 + rho ||u_tilde - u_hat||^2
//
// with one Adam step per block. VqVaeEqualizer holds everything that does not depend on
// whether the butterflies are evaluated in the frequency or the time domain.

#include <span>

#include "json.hpp"
#include "vqeq/eq/adam.hpp"
#include "vqeq/eq/config.hpp"
#include "vqeq/eq/equalizer.hpp"
#include "vqeq/modem/constellation.hpp"
#include "vqeq/modem/demapper.hpp"

namespace vqeq::eq {

/// (1 - rho) ||r - r_tilde||^2 + rho ||u_tilde - u_hat||^2, summed over both polarizations.
[[nodiscard]] double vqvae_loss(const DualPolBlock& r, const DualPolBlock& r_tilde, const DualPolBlock& u_tilde,
                                const DualPolBlock& u_hat, double rho);

class VqVaeEqualizer : public BlockEqualizer {
 public:
  /// Decoder forward pass. Consumes one block of N samples, updates the input buffers and keeps
  /// the intermediates needed by compute_gradients().
  virtual DualPolBlock decoder_forward(const DualPolBlock& r) = 0;
  /// Encoder forward pass on N/2 decisions per polarization; returns N reconstructed samples.
  virtual DualPolBlock encoder_forward(const DualPolBlock& u_hat) = 0;

  /// Exact gradient of the loss w.r.t. every tap (u_hat held constant), as
  /// dl/dRe + j dl/dIm in parameter layout. Requires a decoder and an encoder pass.
  [[nodiscard]] CVec compute_gradients(const DualPolBlock& r_target, const DualPolBlock& u_hat) const;
  /// Gradient used for training: compute_gradients() plus, for the straight-through estimator,
  /// the reconstruction term's gradient carried through the quantizer onto the decoder.
  [[nodiscard]] CVec training_gradients(const DualPolBlock& r_target, const DualPolBlock& u_hat) const;

  /// One Adam step. In decision-directed mode only decoder taps move.
  void adam_step(std::span<const cplx> grads);

  /// Decoder -> MAP demapper -> encoder -> loss -> gradient -> Adam step.
  BlockResult train_block(const DualPolBlock& r);
  BlockResult process(const DualPolBlock& r, bool adapt) override;

  /// Reconstruction target for block r: r delayed by reconstruction_delay() samples.
  /// Advances the target history.
  DualPolBlock advance_target(const DualPolBlock& r);

  [[nodiscard]] std::size_t block_size() const override { return cfg_.block_size; }
  [[nodiscard]] long updates() const override { return updates_; }
  [[nodiscard]] bool diverged() const override { return diverged_; }

  [[nodiscard]] const TrainConfig& config() const noexcept { return cfg_; }
  void set_mode(TrainMode m) noexcept { cfg_.mode = m; }
  [[nodiscard]] const modem::Constellation& constellation() const noexcept { return constellation_; }
  [[nodiscard]] const Adam& adam() const noexcept { return adam_; }
  [[nodiscard]] double noise_variance() const noexcept { return noise_.value(); }

  [[nodiscard]] std::span<const cplx> params() const noexcept { return params_; }
  [[nodiscard]] std::span<const cplx> decoder_params() const noexcept { return {params_.data(), n_dec_}; }
  [[nodiscard]] std::span<const cplx> encoder_params() const noexcept {
    return {params_.data() + n_dec_, params_.size() - n_dec_};
  }
  /// Overwrites all taps (decoder then encoder, parameter layout) and refreshes derived state.
  void set_params(std::span<const cplx> p);

  /// Checkpoint: taps, Adam moments, step count, buffers and demapper state.
  [[nodiscard]] nlohmann::json snapshot() const;
  void restore(const nlohmann::json& snap);

 protected:
  VqVaeEqualizer(TrainConfig cfg, modem::Constellation c, std::size_t n_dec, std::size_t n_enc);

  /// Decoder tap gradient for an output-error signal err = dl/dRe(u_tilde) + j dl/dIm(u_tilde).
  virtual void decoder_gradient(const DualPolBlock& err, std::span<cplx> out) const = 0;
  /// Encoder tap gradient for an output-error signal on r_tilde.
  virtual void encoder_gradient(const DualPolBlock& err, std::span<cplx> out) const = 0;
  /// Gradient w.r.t. the encoder input (u_hat) given the output-error signal on r_tilde.
  [[nodiscard]] virtual DualPolBlock encoder_input_gradient(const DualPolBlock& err) const = 0;
  virtual void on_params_changed() = 0;
  [[nodiscard]] virtual bool has_intermediates() const = 0;
  virtual void save_buffers(nlohmann::json& j) const = 0;
  virtual void load_buffers(const nlohmann::json& j) = 0;

  std::span<cplx> mutable_params() noexcept { return params_; }

  TrainConfig cfg_;
  modem::Constellation constellation_;
  std::size_t n_dec_;
  CVec params_;
  Adam adam_;
  modem::NoiseVarianceTracker noise_;
  DualPolBlock target_hist_;
  // Last forward outputs, kept for the gradient.
  DualPolBlock last_u_tilde_;
  DualPolBlock last_r_tilde_;
  long updates_ = 0;
  bool diverged_ = false;
};

// JSON helpers shared by snapshot code.
[[nodiscard]] nlohmann::json cvec_to_json(std::span<const cplx> v);
[[nodiscard]] CVec cvec_from_json(const nlohmann::json& j);

}  // namespace vqeq::eq

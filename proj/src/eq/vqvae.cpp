#include "vqeq/eq/vqvae.hpp"

#include <cmath>

#include "vqeq/simd/kernels.hpp"

namespace vqeq::eq {

bool output_power_out_of_range(const DualPolBlock& u) {
  const std::size_t n = u.x.size() + u.y.size();
  if (n == 0) return false;
  const double p = (simd::energy(u.x) + simd::energy(u.y)) / static_cast<double>(n);
  return !std::isfinite(p) || p < 1e-3 || p > 1e3;
}

double vqvae_loss(const DualPolBlock& r, const DualPolBlock& r_tilde, const DualPolBlock& u_tilde,
                  const DualPolBlock& u_hat, double rho) {
  require_same_size(r.size(), r_tilde.size(), "vqvae_loss(r)");
  require_same_size(u_tilde.size(), u_hat.size(), "vqvae_loss(u)");
  double rec = 0.0, dec = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (std::size_t t = 0; t < r.size(); ++t) rec += std::norm(r.pol(p)[t] - r_tilde.pol(p)[t]);
    for (std::size_t n = 0; n < u_tilde.size(); ++n) dec += std::norm(u_tilde.pol(p)[n] - u_hat.pol(p)[n]);
  }
  return (1.0 - rho) * rec + rho * dec;
}

VqVaeEqualizer::VqVaeEqualizer(TrainConfig cfg, modem::Constellation c, std::size_t n_dec, std::size_t n_enc)
    : cfg_(cfg),
      constellation_(std::move(c)),
      n_dec_(n_dec),
      params_(n_dec + n_enc),
      adam_(n_dec + n_enc, cfg.adam),
      target_hist_(cfg.reconstruction_delay()) {
  cfg_.validate();
}

CVec VqVaeEqualizer::compute_gradients(const DualPolBlock& r_target, const DualPolBlock& u_hat) const {
  if (!has_intermediates()) throw UsageError("compute_gradients: run decoder_forward and encoder_forward first");
  require_same_size(r_target.size(), last_r_tilde_.size(), "compute_gradients(r)");
  require_same_size(u_hat.size(), last_u_tilde_.size(), "compute_gradients(u_hat)");
  const double rho = cfg_.effective_rho();
  DualPolBlock dec_err(u_hat.size()), enc_err(r_target.size());
  for (int p = 0; p < 2; ++p) {
    for (std::size_t n = 0; n < u_hat.size(); ++n)
      dec_err.pol(p)[n] = 2.0 * rho * (last_u_tilde_.pol(p)[n] - u_hat.pol(p)[n]);
    for (std::size_t t = 0; t < r_target.size(); ++t)
      enc_err.pol(p)[t] = 2.0 * (1.0 - rho) * (last_r_tilde_.pol(p)[t] - r_target.pol(p)[t]);
  }
  CVec g(params_.size());
  decoder_gradient(dec_err, std::span<cplx>(g.data(), n_dec_));
  encoder_gradient(enc_err, std::span<cplx>(g.data() + n_dec_, g.size() - n_dec_));
  return g;
}

CVec VqVaeEqualizer::training_gradients(const DualPolBlock& r_target, const DualPolBlock& u_hat) const {
  CVec g = compute_gradients(r_target, u_hat);
  const double rho = cfg_.effective_rho();
  if (cfg_.gradient != GradientEstimator::straight_through || rho >= 1.0) return g;
  DualPolBlock enc_err(r_target.size());
  for (int p = 0; p < 2; ++p)
    for (std::size_t t = 0; t < r_target.size(); ++t)
      enc_err.pol(p)[t] = 2.0 * (1.0 - rho) * (last_r_tilde_.pol(p)[t] - r_target.pol(p)[t]);
  const DualPolBlock through = encoder_input_gradient(enc_err);
  CVec extra(n_dec_);
  decoder_gradient(through, extra);
  for (std::size_t i = 0; i < n_dec_; ++i) g[i] += extra[i];
  return g;
}

void VqVaeEqualizer::adam_step(std::span<const cplx> grads) {
  const std::size_t end = cfg_.mode == TrainMode::decision_directed ? n_dec_ : params_.size();
  adam_.step(params_, grads, cfg_.learning_rate, 0, end);
  on_params_changed();
}

DualPolBlock VqVaeEqualizer::advance_target(const DualPolBlock& r) {
  const std::size_t n = r.size();
  const std::size_t d = cfg_.reconstruction_delay();
  DualPolBlock target(n);
  for (int p = 0; p < 2; ++p) {
    CVec joined = target_hist_.pol(p);
    joined.insert(joined.end(), r.pol(p).begin(), r.pol(p).end());
    std::copy(joined.begin(), joined.begin() + static_cast<std::ptrdiff_t>(n), target.pol(p).begin());
    target_hist_.pol(p).assign(joined.end() - static_cast<std::ptrdiff_t>(d), joined.end());
  }
  target.block_index = r.block_index;
  return target;
}

BlockResult VqVaeEqualizer::train_block(const DualPolBlock& r) { return process(r, true); }

BlockResult VqVaeEqualizer::process(const DualPolBlock& r, bool adapt) {
  require_same_size(r.size(), cfg_.block_size, "VQ-VAE block");
  BlockResult out;
  const DualPolBlock target = advance_target(r);
  out.u_tilde = decoder_forward(r);
  out.u_hat = DualPolBlock(out.u_tilde.size());
  out.u_hat.block_index = out.u_tilde.block_index = r.block_index;
  const double nv = noise_.value();
  for (int p = 0; p < 2; ++p) modem::map_demap_into(out.u_tilde.pol(p), constellation_, nv, out.u_hat.pol(p));
  const DualPolBlock r_tilde = encoder_forward(out.u_hat);
  out.loss = vqvae_loss(target, r_tilde, out.u_tilde, out.u_hat, cfg_.effective_rho());

  CVec both_u(out.u_tilde.x), both_hat(out.u_hat.x);
  both_u.insert(both_u.end(), out.u_tilde.y.begin(), out.u_tilde.y.end());
  both_hat.insert(both_hat.end(), out.u_hat.y.begin(), out.u_hat.y.end());
  noise_.update(both_u, both_hat);

  if (output_power_out_of_range(out.u_tilde) || !std::isfinite(out.loss)) diverged_ = true;
  out.diverged = diverged_;
  if (adapt && !diverged_) {
    adam_step(training_gradients(target, out.u_hat));
    ++updates_;
  }
  return out;
}

void VqVaeEqualizer::set_params(std::span<const cplx> p) {
  require_same_size(p.size(), params_.size(), "set_params");
  std::copy(p.begin(), p.end(), params_.begin());
  on_params_changed();
}

nlohmann::json cvec_to_json(std::span<const cplx> v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

CVec cvec_from_json(const nlohmann::json& j) {
  CVec v;
  v.reserve(j.size());
  for (const auto& e : j) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return v;
}

nlohmann::json VqVaeEqualizer::snapshot() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = kind();
  j["block_size"] = cfg_.block_size;
  j["n_tap_fd"] = cfg_.n_tap_fd;
  j["n_tap_enc"] = cfg_.n_tap_enc;
  j["decoder_taps"] = cvec_to_json(decoder_params());
  j["encoder_taps"] = cvec_to_json(encoder_params());
  j["adam"] = {{"step_count", adam_.step_count()},
               {"first_moment", cvec_to_json(adam_.first_moment())},
               {"second_moment", cvec_to_json(adam_.second_moment())}};
  j["updates"] = updates_;
  j["noise_variance"] = noise_.value();
  j["diverged"] = diverged_;
  j["target_history"] = {cvec_to_json(target_hist_.x), cvec_to_json(target_hist_.y)};
  save_buffers(j["buffers"]);
  return j;
}

void VqVaeEqualizer::restore(const nlohmann::json& snap) {
  if (snap.at("schema").get<int>() != 1) throw ConfigError("snapshot: unsupported schema");
  if (snap.at("kind").get<std::string>() != kind()) throw ConfigError("snapshot: equalizer kind mismatch");
  if (snap.at("block_size").get<std::size_t>() != cfg_.block_size ||
      snap.at("n_tap_fd").get<std::size_t>() != cfg_.n_tap_fd ||
      snap.at("n_tap_enc").get<std::size_t>() != cfg_.n_tap_enc)
    throw ConfigError("snapshot: geometry does not match this equalizer");
  CVec p = cvec_from_json(snap.at("decoder_taps"));
  const CVec e = cvec_from_json(snap.at("encoder_taps"));
  p.insert(p.end(), e.begin(), e.end());
  set_params(p);
  const auto& a = snap.at("adam");
  CVec m = cvec_from_json(a.at("first_moment"));
  CVec v = cvec_from_json(a.at("second_moment"));
  require_same_size(m.size(), params_.size(), "snapshot adam");
  adam_.restore(std::move(m), std::move(v), a.at("step_count").get<long>());
  updates_ = snap.at("updates").get<long>();
  noise_.reset(snap.at("noise_variance").get<double>());
  diverged_ = snap.at("diverged").get<bool>();
  target_hist_ = DualPolBlock(cvec_from_json(snap.at("target_history").at(0)),
                              cvec_from_json(snap.at("target_history").at(1)));
  load_buffers(snap.at("buffers"));
}

}  // namespace vqeq::eq

#include "vqeq/eq/config.hpp"

#include "vqeq/types.hpp"

namespace vqeq::eq {

void TrainConfig::validate() const {
  if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("train: rho must lie in (0, 1]");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
    throw ConfigError("train: adam betas must lie in [0, 1)");
  if (!(adam.eps > 0.0)) throw ConfigError("train: adam eps must be > 0");
  if (!is_power_of_two(block_size) || block_size < 4) throw ConfigError("train: block_size must be a power of two >= 4");
  if (n_tap_fd == 0 || n_tap_fd > block_size / 2)
    throw ConfigError("train: n_tap_fd must lie in [1, block_size / 2] for 50% overlap-save");
  if (n_tap_enc == 0 || n_tap_enc > block_size)
    throw ConfigError("train: n_tap_enc must lie in [1, block_size] for 50% overlap-save");
}

std::string to_string(TrainMode m) { return m == TrainMode::vqvae ? "vqvae" : "decision_directed"; }

std::string to_string(GradientEstimator g) {
  return g == GradientEstimator::straight_through ? "straight_through" : "stop_gradient";
}

TrainMode train_mode_from_string(const std::string& s) {
  if (s == "vqvae") return TrainMode::vqvae;
  if (s == "decision_directed" || s == "dd") return TrainMode::decision_directed;
  throw ConfigError("unknown train mode '" + s + "'");
}

GradientEstimator gradient_estimator_from_string(const std::string& s) {
  if (s == "straight_through") return GradientEstimator::straight_through;
  if (s == "stop_gradient") return GradientEstimator::stop_gradient;
  throw ConfigError("unknown gradient estimator '" + s + "'");
}

}  // namespace vqeq::eq

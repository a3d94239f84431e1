#pragma once

#include <span>

#include "vqeq/modem/constellation.hpp"

namespace vqeq::modem {

/// MAP decision: argmax_i [ log p_i - |u - a_i|^2 / noise_var ], ties to the lowest index.
/// For uniform priors this is nearest-point slicing for any noise_var.
[[nodiscard]] int map_index(cplx u, const Constellation& c, double noise_var);
[[nodiscard]] CVec map_demap(std::span<const cplx> equalized, const Constellation& c, double noise_var);
void map_demap_into(std::span<const cplx> equalized, const Constellation& c, double noise_var, std::span<cplx> out);

/// Running noise-variance estimate for the blind MAP demapper: mean |u - u_hat|^2 of the
/// previous block, floored at 1e-4, starting at 0.1.
class NoiseVarianceTracker {
 public:
  static constexpr double kInitial = 0.1;
  static constexpr double kFloor = 1e-4;

  [[nodiscard]] double value() const noexcept { return value_; }
  void update(std::span<const cplx> equalized, std::span<const cplx> decisions);
  void reset(double v = kInitial) noexcept { value_ = v; }

 private:
  double value_ = kInitial;
};

}  // namespace vqeq::modem

#pragma once

#include <span>

#include "vqeq/eq/config.hpp"
#include "vqeq/types.hpp"

namespace vqeq::eq {

/// Adam over complex parameters, treating real and imaginary parts as independent reals.
///
/// Gradients are passed as G = dL/dRe + j dL/dIm. first_moment() stores the two first moments
/// as the real/imag parts of one complex number, second_moment() likewise.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n_params, AdamConfig cfg);

  /// One bias-corrected step on params[begin, end); step_count advances by one regardless.
  void step(std::span<cplx> params, std::span<const cplx> grads, double lr, std::size_t begin, std::size_t end);
  void step(std::span<cplx> params, std::span<const cplx> grads, double lr) {
    step(params, grads, lr, 0, params.size());
  }

  [[nodiscard]] long step_count() const noexcept { return step_count_; }
  [[nodiscard]] const CVec& first_moment() const noexcept { return m_; }
  [[nodiscard]] const CVec& second_moment() const noexcept { return v_; }
  [[nodiscard]] const AdamConfig& config() const noexcept { return cfg_; }

  void restore(CVec m, CVec v, long step_count);

 private:
  AdamConfig cfg_;
  CVec m_;
  CVec v_;
  long step_count_ = 0;
};

}  // namespace vqeq::eq

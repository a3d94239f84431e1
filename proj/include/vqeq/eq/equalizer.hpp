#pragma once

#include <memory>
#include <string>

#include "vqeq/types.hpp"

namespace vqeq::eq {

struct BlockResult {
  DualPolBlock u_tilde;  // equalizer output, N/2 symbols per polarization
  DualPolBlock u_hat;    // decisions (empty for equalizers without an internal demapper)
  double loss = 0.0;
  bool diverged = false;
};

/// Anything that turns blocks of N samples (2 sps) into N/2 symbols per polarization.
class BlockEqualizer {
 public:
  virtual ~BlockEqualizer() = default;

  virtual BlockResult process(const DualPolBlock& r, bool adapt) = 0;
  [[nodiscard]] virtual std::size_t block_size() const = 0;
  [[nodiscard]] virtual long updates() const = 0;
  [[nodiscard]] virtual std::string kind() const = 0;
  [[nodiscard]] virtual bool diverged() const = 0;
  [[nodiscard]] virtual std::unique_ptr<BlockEqualizer> clone() const = 0;
};

/// Divergence guard on equalizer output power: mean |u|^2 outside [1e-3, 1e3] or non-finite.
[[nodiscard]] bool output_power_out_of_range(const DualPolBlock& u);

}  // namespace vqeq::eq

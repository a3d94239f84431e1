#pragma once
// Godard p=2 constant-modulus butterfly equalizers (per-symbol CMA and block-averaged CMAbatch).
//
// Same fractionally spaced structure as the TD VQ-VAE decoder:
//   u_p[n] = sum_q sum_j w_pq[j] r_q[2n + 1 - j]
// Cost per symbol J = sum_p (|u_p|^2 - R2)^2, R2 = E|a|^4 / E|a|^2.
// The update is w_pq[j] -= mu * (|u_p|^2 - R2) * u_p * conj(r_q[2n + 1 - j]), which is the
// exact gradient scaled by mu/4.

#include <array>
#include <utility>
#include <vector>

#include "vqeq/eq/equalizer.hpp"
#include "vqeq/modem/constellation.hpp"

namespace vqeq::baselines {

using CmaTaps = std::array<CVec, 4>;  // arm index p*2 + q

struct CmaScheduleConfig {
  double mu0 = 1e-3;
  long halve_every = 2000;
  double floor = 1e-5;
};

struct CmaState {
  CmaTaps taps;
  double step_size = 1e-3;
  double base_step = 1e-3;
  std::vector<std::pair<long, double>> schedule;  // (update_index, step_size), indices strictly increasing
  std::vector<double> radius_targets;             // single Godard radius R2
  long updates = 0;
  DualPolBlock prev;  // previous input block (filter memory)
  bool diverged = false;

  void validate() const;
};

/// E|a|^4 / E|a|^2 under the constellation priors.
[[nodiscard]] double godard_radius(const modem::Constellation& c);

/// Halving table: (k * halve_every, max(mu0 / 2^k, floor)) for k = 1.. until the floor is reached.
[[nodiscard]] std::vector<std::pair<long, double>> halving_schedule(const CmaScheduleConfig& s);

/// Center-spike xx/yy taps (index n_tap_td / 2 + 1, the decoder's even-path center), default schedule.
[[nodiscard]] CmaState make_cma_state(std::size_t n_tap_td, std::size_t block_size, double r2,
                                      const CmaScheduleConfig& s = {});

/// Piecewise-constant step: the last entry with index <= update_index, else base_step.
/// Stores the result in state.step_size and returns it.
double apply_schedule(CmaState& state, long update_index);

/// Butterfly output for one symbol: anchor is the window index of r[2n + 1].
[[nodiscard]] std::array<cplx, 2> cma_output(const CmaTaps& w, const DualPolBlock& window, std::size_t anchor);
/// Per-symbol cost sum_p (|u_p|^2 - R2)^2.
[[nodiscard]] double cma_sample_cost(const CmaTaps& w, const DualPolBlock& window, std::size_t anchor, double r2);
/// Exact gradient dJ/dRe + j dJ/dIm of cma_sample_cost for every tap.
[[nodiscard]] CmaTaps cma_sample_gradient(const CmaTaps& w, const DualPolBlock& window, std::size_t anchor, double r2);

/// Per-symbol CMA over one block of N samples; one update per output symbol.
/// Returns N/2 outputs per polarization.
DualPolBlock cma_update(CmaState& state, const DualPolBlock& r_block);
/// CMAbatch: outputs with the current taps, one update with the gradient averaged over the block.
DualPolBlock cma_batch_update(CmaState& state, const DualPolBlock& r_block);
/// Forward only, no adaptation (still advances the filter memory).
DualPolBlock cma_forward(CmaState& state, const DualPolBlock& r_block);

/// BlockEqualizer wrapper. Outputs are raw (no phase recovery); u_hat is left empty.
class CmaEqualizer final : public eq::BlockEqualizer {
 public:
  CmaEqualizer(CmaState state, bool batch) : state_(std::move(state)), batch_(batch) { state_.validate(); }

  eq::BlockResult process(const DualPolBlock& r, bool adapt) override;
  [[nodiscard]] std::size_t block_size() const override { return state_.prev.size(); }
  [[nodiscard]] long updates() const override { return state_.updates; }
  [[nodiscard]] std::string kind() const override { return batch_ ? "cma_batch" : "cma"; }
  [[nodiscard]] bool diverged() const override { return state_.diverged; }
  [[nodiscard]] std::unique_ptr<eq::BlockEqualizer> clone() const override {
    return std::make_unique<CmaEqualizer>(*this);
  }
  [[nodiscard]] const CmaState& state() const noexcept { return state_; }

 private:
  CmaState state_;
  bool batch_;
};

}  // namespace vqeq::baselines

#pragma once
// Genie-aided carrier phase recovery for the CMA baselines (simulation only).

#include <span>

#include "vqeq/types.hpp"

namespace vqeq::baselines {

/// Least-squares common phase: rotates outputs by angle(sum truth * conj(outputs)).
/// A zero correlation leaves the outputs unchanged.
[[nodiscard]] CVec genie_cpr(std::span<const cplx> outputs, std::span<const cplx> truth);
/// Per polarization.
[[nodiscard]] DualPolBlock genie_cpr(const DualPolBlock& outputs, const DualPolBlock& truth);

/// Which transmitted polarization and symbol delay each output locks onto.
/// Output p at index n corresponds to truth.pol(source[p])[n - delay[p]].
struct PolAlignment {
  int source[2] = {0, 1};
  int delay[2] = {0, 0};
};

/// Picks, per output polarization, the (source, delay) maximizing |sum u[n] conj(truth[n - d])|
/// over output indices [begin, end); phase-blind, so it works before CPR.
[[nodiscard]] PolAlignment align_by_correlation(const DualPolBlock& outputs, const DualPolBlock& truth,
                                                std::size_t begin, std::size_t end, int max_delay);

/// truth.pol(source[p])[n - delay[p]] for n in [begin, end); zeros where out of range.
[[nodiscard]] DualPolBlock aligned_truth(const DualPolBlock& truth, const PolAlignment& a, std::size_t begin,
                                         std::size_t end);

}  // namespace vqeq::baselines

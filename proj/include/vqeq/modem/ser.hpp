#pragma once

#include <cstdint>
#include <span>

#include "vqeq/types.hpp"

namespace vqeq::modem {

struct SerReport {
  long symbol_errors = 0;
  long symbols_counted = 0;
  double ser = 1.0;
  int rotation_deg_x = 0;  // applied to the decided x output
  int rotation_deg_y = 0;
  bool pol_swap = false;
  int delay = 0;  // decided[n] is compared with truth[n - delay]
  bool converged = false;
};

/// An ambiguity hypothesis resolved by the genie: optional pol swap, per-output quarter
/// rotations and a symbol delay.
struct Alignment {
  bool pol_swap = false;
  int quarter_turns[2] = {0, 0};
  int delay = 0;
};

/// SER under the best of {pol swap} x {4 rotations per polarization} x {delay in
/// [-max_delay, max_delay]}. The first skip_first symbols are excluded. Decisions and truth
/// are constellation points; a symbol is in error when they differ by more than 1e-6.
[[nodiscard]] SerReport measure_ser(const DualPolBlock& decided, const DualPolBlock& truth, std::size_t skip_first,
                                    int max_delay);

/// Counts errors under a fixed alignment over decided indices [begin, end).
[[nodiscard]] SerReport count_errors(const DualPolBlock& decided, const DualPolBlock& truth, const Alignment& a,
                                     std::size_t begin, std::size_t end);

/// Per decided index n, how many polarizations are in error / were counted (0..2 each) under
/// a fixed alignment. Used for running SER traces.
struct ErrorFlags {
  std::vector<std::uint8_t> errors;
  std::vector<std::uint8_t> counted;
};
[[nodiscard]] ErrorFlags error_flags(const DualPolBlock& decided, const DualPolBlock& truth, const Alignment& a);

/// Closed-form square M-QAM symbol error probability at Es/N0 = snr_db (same SNR convention as
/// channel::add_awgn after a matched filter).
[[nodiscard]] double theoretical_ser_qam(int order, double snr_db);

/// Gaussian tail function.
[[nodiscard]] double q_function(double x);

}  // namespace vqeq::modem

#pragma once
// Inference cost accounting: complex multiplications per equalized symbol per polarization.

#include <string>
#include <vector>

namespace vqeq::eq {

enum class EqualizerDomain { td, fd };

/// td: 2 * n_tap. fd: 3 * log2(n) + 8, n a power of two (ConfigError otherwise).
[[nodiscard]] long count_inference_mults(EqualizerDomain kind, long n_tap_or_n);

struct ComplexityRow {
  long n_tap;
  long td_mults;
  long fd_mults;  // with N = n_tap / 2
  std::string winner;  // "td" or "fd"; ties go to "td"
};

[[nodiscard]] std::vector<ComplexityRow> complexity_table(const std::vector<long>& n_tap_grid);
/// CSV with header n_tap,td_mults,fd_mults,winner.
[[nodiscard]] std::string emit_complexity_table(const std::vector<long>& n_tap_grid);

}  // namespace vqeq::eq

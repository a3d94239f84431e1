#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqeq {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Invalid or inconsistent configuration (bad sizes, infeasible parameters).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Buffer lengths that do not line up.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-convergence, divergence guard).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// API called out of order.
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

/// One block of dual-polarization samples or symbols.
struct DualPolBlock {
  CVec x;
  CVec y;
  long block_index = 0;

  DualPolBlock() = default;
  DualPolBlock(CVec x_, CVec y_, long k = 0) : x(std::move(x_)), y(std::move(y_)), block_index(k) {
    if (x.size() != y.size()) throw ShapeError("DualPolBlock: x/y length mismatch");
  }
  explicit DualPolBlock(std::size_t n) : x(n), y(n) {}

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  CVec& pol(int p) { return p == 0 ? x : y; }
  [[nodiscard]] const CVec& pol(int p) const { return p == 0 ? x : y; }
};

[[nodiscard]] inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

[[nodiscard]] inline bool all_finite(std::span<const cplx> v) noexcept {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace vqeq

#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "vqeq/types.hpp"

namespace vqeq::modem {

/// Points with prior probabilities, normalized to unit mean power under the priors.
class Constellation {
 public:
  /// Validates and normalizes: priors are rescaled to sum to one and points to unit mean power.
  Constellation(CVec points, std::vector<double> priors, std::string label);

  [[nodiscard]] const CVec& points() const noexcept { return points_; }
  [[nodiscard]] const std::vector<double>& priors() const noexcept { return priors_; }
  [[nodiscard]] const std::vector<double>& log_priors() const noexcept { return log_priors_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool uniform() const noexcept { return uniform_; }

  [[nodiscard]] double entropy_bits() const;
  /// E|a|^2 under the priors (1 after construction).
  [[nodiscard]] double mean_power() const;
  /// E|a|^4 under the priors.
  [[nodiscard]] double fourth_moment() const;

 private:
  CVec points_;
  std::vector<double> priors_;
  std::vector<double> log_priors_;
  std::string label_;
  bool uniform_ = true;
};

/// Square QAM of the given order (4, 16, 64, 256, ...), uniform priors.
[[nodiscard]] Constellation make_uniform_qam(int order);

struct PcsConfig {
  double target_entropy_bits = 5.0;
  int base_qam_order = 64;
};

struct PcsSolution {
  Constellation constellation;
  double lambda;  // shaping parameter on the unnormalized integer grid
  int iterations;
};

/// Maxwell-Boltzmann priors p_i ~ exp(-lambda |a_i|^2) over the unnormalized square grid,
/// lambda found by bisection to hit the target entropy within 1e-6 bits.
[[nodiscard]] PcsSolution solve_pcs_qam(const PcsConfig& cfg);
[[nodiscard]] Constellation make_pcs_qam(const PcsConfig& cfg);

/// Maxwell-Boltzmann priors on a point set for a given lambda (forward evaluation).
[[nodiscard]] std::vector<double> maxwell_boltzmann_priors(std::span<const cplx> grid, double lambda);
[[nodiscard]] double entropy_bits(std::span<const double> priors);

/// Unnormalized square grid with odd integer coordinates, row-major in (I, Q).
[[nodiscard]] CVec square_qam_grid(int order);

/// i.i.d. draws from the priors. Deterministic for a fixed seed.
[[nodiscard]] CVec draw_symbols(const Constellation& c, std::size_t n, std::uint64_t rng_seed);
/// Same as draw_symbols but returns point indices.
[[nodiscard]] std::vector<int> draw_indices(const Constellation& c, std::size_t n, std::uint64_t rng_seed);

}  // namespace vqeq::modem

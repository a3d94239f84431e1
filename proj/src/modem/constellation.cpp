#include "vqeq/modem/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vqeq/rng.hpp"

namespace vqeq::modem {

Constellation::Constellation(CVec points, std::vector<double> priors, std::string label)
    : points_(std::move(points)), priors_(std::move(priors)), label_(std::move(label)) {
  if (points_.empty()) throw ConfigError("constellation: no points");
  require_same_size(points_.size(), priors_.size(), "constellation points/priors");
  double sum = 0.0;
  for (double p : priors_) {
    if (!(p > 0.0)) throw ConfigError("constellation: priors must be strictly positive");
    sum += p;
  }
  for (double& p : priors_) p /= sum;
  double power = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) power += priors_[i] * std::norm(points_[i]);
  if (!(power > 0.0)) throw ConfigError("constellation: zero mean power");
  const double scale = 1.0 / std::sqrt(power);
  for (auto& a : points_) a *= scale;
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (std::abs(points_[i] - points_[j]) < 1e-12) throw ConfigError("constellation: duplicate points");
  log_priors_.resize(priors_.size());
  std::transform(priors_.begin(), priors_.end(), log_priors_.begin(), [](double p) { return std::log(p); });
  uniform_ = std::all_of(priors_.begin(), priors_.end(),
                         [&](double p) { return std::abs(p - priors_.front()) < 1e-15; });
}

double Constellation::entropy_bits() const { return modem::entropy_bits(priors_); }

double Constellation::mean_power() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += priors_[i] * std::norm(points_[i]);
  return s;
}

double Constellation::fourth_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += priors_[i] * std::norm(points_[i]) * std::norm(points_[i]);
  return s;
}

CVec square_qam_grid(int order) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (order < 4 || side * side != order || side % 2 != 0)
    throw ConfigError("square QAM order must be the square of an even integer, got " + std::to_string(order));
  CVec g;
  g.reserve(static_cast<std::size_t>(order));
  for (int i = 0; i < side; ++i)
    for (int q = 0; q < side; ++q) g.emplace_back(2 * i - side + 1, 2 * q - side + 1);
  return g;
}

Constellation make_uniform_qam(int order) {
  CVec g = square_qam_grid(order);
  std::vector<double> priors(g.size(), 1.0 / static_cast<double>(g.size()));
  return {std::move(g), std::move(priors), std::to_string(order) + "-QAM"};
}

double entropy_bits(std::span<const double> priors) {
  double h = 0.0;
  for (double p : priors)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

std::vector<double> maxwell_boltzmann_priors(std::span<const cplx> grid, double lambda) {
  std::vector<double> p(grid.size());
  // Shift by the minimum energy so exp() cannot underflow for every point at once.
  double e_min = std::norm(grid[0]);
  for (const auto& a : grid) e_min = std::min(e_min, std::norm(a));
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p[i] = std::exp(-lambda * (std::norm(grid[i]) - e_min));
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

PcsSolution solve_pcs_qam(const PcsConfig& cfg) {
  const CVec grid = square_qam_grid(cfg.base_qam_order);
  const double h_max = std::log2(static_cast<double>(cfg.base_qam_order));
  const double h = cfg.target_entropy_bits;
  if (!(h > h_max / 2.0 && h <= h_max))
    throw ConfigError("pcs: target entropy " + std::to_string(h) + " infeasible for " +
                      std::to_string(cfg.base_qam_order) + "-QAM");
  const std::string label = "PCS-" + std::to_string(cfg.base_qam_order) + "-QAM(H=" + std::to_string(h) + ")";
  if (h_max - h < 1e-12) {
    std::vector<double> priors(grid.size(), 1.0 / static_cast<double>(grid.size()));
    return {Constellation(grid, std::move(priors), label), 0.0, 0};
  }

  // Entropy is strictly decreasing in lambda; bracket then bisect.
  auto entropy_at = [&](double lambda) { return entropy_bits(maxwell_boltzmann_priors(grid, lambda)); };
  double lo = 0.0, hi = 1e-3;
  while (entropy_at(hi) > h) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("pcs: could not bracket lambda");
  }
  constexpr int kMaxIter = 200;
  for (int it = 1; it <= kMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = entropy_at(mid);
    if (std::abs(hm - h) <= 1e-9 || hi - lo < 1e-15) {
      return {Constellation(grid, maxwell_boltzmann_priors(grid, mid), label), mid, it};
    }
    (hm > h ? lo : hi) = mid;
  }
  throw NumericalError("pcs: bisection did not converge in 200 iterations");
}

Constellation make_pcs_qam(const PcsConfig& cfg) { return solve_pcs_qam(cfg).constellation; }

std::vector<int> draw_indices(const Constellation& c, std::size_t n, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  std::vector<int> idx(n);
  if (c.uniform()) {
    std::uniform_int_distribution<int> d(0, static_cast<int>(c.size()) - 1);
    for (auto& i : idx) i = d(rng);
  } else {
    std::discrete_distribution<int> d(c.priors().begin(), c.priors().end());
    for (auto& i : idx) i = d(rng);
  }
  return idx;
}

CVec draw_symbols(const Constellation& c, std::size_t n, std::uint64_t rng_seed) {
  const auto idx = draw_indices(c, n, rng_seed);
  CVec s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = c.points()[static_cast<std::size_t>(idx[i])];
  return s;
}

}  // namespace vqeq::modem

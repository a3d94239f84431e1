#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vqeq/types.hpp"

namespace testing {

using vqeq::cplx;
using vqeq::CVec;

inline CVec random_cvec(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, scale);
  CVec v(n);
  for (auto& z : v) z = {nd(rng), nd(rng)};
  return v;
}

inline vqeq::DualPolBlock random_block(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  return {random_cvec(n, seed, scale), random_cvec(n, seed ^ 0x9e3779b97f4a7c15ULL, scale)};
}

inline double max_abs_diff(const CVec& a, const CVec& b) {
  double m = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const vqeq::DualPolBlock& a, const vqeq::DualPolBlock& b) {
  return std::max(max_abs_diff(a.x, b.x), max_abs_diff(a.y, b.y));
}

// O(n^2) DFT, forward sign.
inline CVec naive_dft(const CVec& x) {
  const std::size_t n = x.size();
  CVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{};
    for (std::size_t t = 0; t < n; ++t)
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n));
    out[k] = acc;
  }
  return out;
}

}  // namespace testing

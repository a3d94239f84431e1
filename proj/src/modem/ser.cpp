#include "vqeq/modem/ser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vqeq::modem {
namespace {

constexpr double kSameTol = 1e-6;

cplx quarter_turn(cplx z, int k) {
  switch (k & 3) {
    case 1:
      return {-z.imag(), z.real()};
    case 2:
      return -z;
    case 3:
      return {z.imag(), -z.real()};
    default:
      return z;
  }
}

// Index range of decided symbols usable for every delay in the window.
std::pair<std::size_t, std::size_t> usable_range(std::size_t n, std::size_t skip, int max_delay) {
  const auto md = static_cast<std::size_t>(std::max(0, max_delay));
  const std::size_t begin = skip + md;
  const std::size_t end = n > md ? n - md : 0;
  return {begin, std::max(begin, end)};
}

}  // namespace

SerReport count_errors(const DualPolBlock& decided, const DualPolBlock& truth, const Alignment& a, std::size_t begin,
                       std::size_t end) {
  require_same_size(decided.size(), truth.size(), "measure_ser");
  SerReport r;
  r.pol_swap = a.pol_swap;
  r.delay = a.delay;
  r.rotation_deg_x = 90 * (a.quarter_turns[0] & 3);
  r.rotation_deg_y = 90 * (a.quarter_turns[1] & 3);
  for (int p = 0; p < 2; ++p) {
    const CVec& d = decided.pol(p);
    const CVec& t = truth.pol(a.pol_swap ? 1 - p : p);
    for (std::size_t n = begin; n < end; ++n) {
      const auto m = static_cast<std::ptrdiff_t>(n) - a.delay;
      if (m < 0 || m >= static_cast<std::ptrdiff_t>(t.size())) continue;
      ++r.symbols_counted;
      if (std::abs(quarter_turn(d[n], a.quarter_turns[p]) - t[static_cast<std::size_t>(m)]) > kSameTol)
        ++r.symbol_errors;
    }
  }
  r.ser = r.symbols_counted ? static_cast<double>(r.symbol_errors) / static_cast<double>(r.symbols_counted) : 1.0;
  r.converged = r.ser < 0.9;
  return r;
}

ErrorFlags error_flags(const DualPolBlock& decided, const DualPolBlock& truth, const Alignment& a) {
  require_same_size(decided.size(), truth.size(), "error_flags");
  ErrorFlags f{std::vector<std::uint8_t>(decided.size()), std::vector<std::uint8_t>(decided.size())};
  for (int p = 0; p < 2; ++p) {
    const CVec& d = decided.pol(p);
    const CVec& t = truth.pol(a.pol_swap ? 1 - p : p);
    for (std::size_t n = 0; n < d.size(); ++n) {
      const auto m = static_cast<std::ptrdiff_t>(n) - a.delay;
      if (m < 0 || m >= static_cast<std::ptrdiff_t>(t.size())) continue;
      ++f.counted[n];
      if (std::abs(quarter_turn(d[n], a.quarter_turns[p]) - t[static_cast<std::size_t>(m)]) > kSameTol) ++f.errors[n];
    }
  }
  return f;
}

SerReport measure_ser(const DualPolBlock& decided, const DualPolBlock& truth, std::size_t skip_first, int max_delay) {
  require_same_size(decided.size(), truth.size(), "measure_ser");
  const auto [begin, end] = usable_range(decided.size(), skip_first, max_delay);
  if (begin >= end) throw ShapeError("measure_ser: nothing left to count after skip and delay window");

  // Hypothesis search on a prefix, final count on the full range.
  const std::size_t search_end = std::min(end, begin + 4096);
  Alignment best;
  long best_err = std::numeric_limits<long>::max();
  for (int delay = -max_delay; delay <= max_delay; ++delay) {
    for (int swap = 0; swap < 2; ++swap) {
      Alignment a;
      a.pol_swap = swap != 0;
      a.delay = delay;
      long total = 0;
      // Rotations are independent per output polarization.
      for (int p = 0; p < 2; ++p) {
        const CVec& d = decided.pol(p);
        const CVec& t = truth.pol(a.pol_swap ? 1 - p : p);
        long best_p = std::numeric_limits<long>::max();
        for (int k = 0; k < 4; ++k) {
          long e = 0;
          for (std::size_t n = begin; n < search_end; ++n) {
            const auto m = static_cast<std::ptrdiff_t>(n) - delay;
            if (std::abs(quarter_turn(d[n], k) - t[static_cast<std::size_t>(m)]) > kSameTol) ++e;
          }
          if (e < best_p) {
            best_p = e;
            a.quarter_turns[p] = k;
          }
        }
        total += best_p;
      }
      if (total < best_err) {
        best_err = total;
        best = a;
      }
    }
  }
  return count_errors(decided, truth, best, begin, end);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double theoretical_ser_qam(int order, double snr_db) {
  const double m = static_cast<double>(order);
  const double side = std::sqrt(m);
  if (order < 4 || std::abs(side - std::round(side)) > 1e-9) throw ConfigError("theoretical_ser_qam: square QAM only");
  const double es_n0 = std::pow(10.0, snr_db / 10.0);
  const double p_side = 2.0 * (1.0 - 1.0 / side) * q_function(std::sqrt(3.0 * es_n0 / (m - 1.0)));
  return p_side * (2.0 - p_side);
}

}  // namespace vqeq::modem

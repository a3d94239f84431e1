#include "vqeq/eq/complexity.hpp"

#include <bit>
#include <sstream>

#include "vqeq/types.hpp"

namespace vqeq::eq {

long count_inference_mults(EqualizerDomain kind, long n_tap_or_n) {
  if (n_tap_or_n <= 0) throw ConfigError("count_inference_mults: size must be positive");
  if (kind == EqualizerDomain::td) return 2 * n_tap_or_n;
  const auto n = static_cast<unsigned long>(n_tap_or_n);
  if (!is_power_of_two(n)) throw ConfigError("count_inference_mults: fd size must be a power of two");
  return 3 * static_cast<long>(std::countr_zero(n)) + 8;
}

std::vector<ComplexityRow> complexity_table(const std::vector<long>& n_tap_grid) {
  std::vector<ComplexityRow> rows;
  rows.reserve(n_tap_grid.size());
  for (long nt : n_tap_grid) {
    if (nt < 2 || nt % 2 != 0) throw ConfigError("complexity_table: n_tap must be even and >= 2");
    ComplexityRow r{nt, count_inference_mults(EqualizerDomain::td, nt), count_inference_mults(EqualizerDomain::fd, nt / 2), {}};
    r.winner = r.fd_mults < r.td_mults ? "fd" : "td";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string emit_complexity_table(const std::vector<long>& n_tap_grid) {
  std::ostringstream os;
  os << "n_tap,td_mults,fd_mults,winner\n";
  for (const auto& r : complexity_table(n_tap_grid))
    os << r.n_tap << ',' << r.td_mults << ',' << r.fd_mults << ',' << r.winner << '\n';
  return os.str();
}

}  // namespace vqeq::eq

#include "vqeq/modem/demapper.hpp"

#include <algorithm>

namespace vqeq::modem {

int map_index(cplx u, const Constellation& c, double noise_var) {
  if (!(noise_var > 0.0)) throw ConfigError("map_demap: noise_var must be > 0");
  const auto& pts = c.points();
  int best = 0;
  if (c.uniform()) {
    double best_d = std::norm(u - pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double d = std::norm(u - pts[i]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }
  const auto& lp = c.log_priors();
  const double inv = 1.0 / noise_var;
  double best_m = lp[0] - std::norm(u - pts[0]) * inv;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double m = lp[i] - std::norm(u - pts[i]) * inv;
    if (m > best_m) {
      best_m = m;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void map_demap_into(std::span<const cplx> equalized, const Constellation& c, double noise_var, std::span<cplx> out) {
  require_same_size(equalized.size(), out.size(), "map_demap");
  for (std::size_t i = 0; i < equalized.size(); ++i)
    out[i] = c.points()[static_cast<std::size_t>(map_index(equalized[i], c, noise_var))];
}

CVec map_demap(std::span<const cplx> equalized, const Constellation& c, double noise_var) {
  CVec out(equalized.size());
  map_demap_into(equalized, c, noise_var, out);
  return out;
}

void NoiseVarianceTracker::update(std::span<const cplx> equalized, std::span<const cplx> decisions) {
  require_same_size(equalized.size(), decisions.size(), "NoiseVarianceTracker");
  if (equalized.empty()) return;
  double s = 0.0;
  for (std::size_t i = 0; i < equalized.size(); ++i) s += std::norm(equalized[i] - decisions[i]);
  value_ = std::max(kFloor, s / static_cast<double>(equalized.size()));
}

}  // namespace vqeq::modem

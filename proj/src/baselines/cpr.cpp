#include "vqeq/baselines/cpr.hpp"

#include <cmath>

namespace vqeq::baselines {

CVec genie_cpr(std::span<const cplx> outputs, std::span<const cplx> truth) {
  require_same_size(outputs.size(), truth.size(), "genie_cpr");
  cplx corr{};
  for (std::size_t i = 0; i < outputs.size(); ++i) corr += truth[i] * std::conj(outputs[i]);
  CVec out(outputs.begin(), outputs.end());
  if (std::abs(corr) == 0.0) return out;
  const cplx rot = corr / std::abs(corr);
  for (auto& z : out) z *= rot;
  return out;
}

DualPolBlock genie_cpr(const DualPolBlock& outputs, const DualPolBlock& truth) {
  DualPolBlock out(genie_cpr(outputs.x, truth.x), genie_cpr(outputs.y, truth.y), outputs.block_index);
  return out;
}

PolAlignment align_by_correlation(const DualPolBlock& outputs, const DualPolBlock& truth, std::size_t begin,
                                  std::size_t end, int max_delay) {
  if (end > outputs.size() || begin >= end) throw ShapeError("align_by_correlation: bad range");
  PolAlignment a;
  const auto nt = static_cast<long>(truth.size());
  for (int p = 0; p < 2; ++p) {
    double best = -1.0;
    for (int s = 0; s < 2; ++s)
      for (int d = -max_delay; d <= max_delay; ++d) {
        cplx acc{};
        for (std::size_t n = begin; n < end; ++n) {
          const long t = static_cast<long>(n) - d;
          if (t >= 0 && t < nt) acc += outputs.pol(p)[n] * std::conj(truth.pol(s)[static_cast<std::size_t>(t)]);
        }
        if (std::abs(acc) > best) {
          best = std::abs(acc);
          a.source[p] = s;
          a.delay[p] = d;
        }
      }
  }
  return a;
}

DualPolBlock aligned_truth(const DualPolBlock& truth, const PolAlignment& a, std::size_t begin, std::size_t end) {
  DualPolBlock out(end - begin);
  const auto nt = static_cast<long>(truth.size());
  for (int p = 0; p < 2; ++p)
    for (std::size_t n = begin; n < end; ++n) {
      const long t = static_cast<long>(n) - a.delay[p];
      if (t >= 0 && t < nt) out.pol(p)[n - begin] = truth.pol(a.source[p])[static_cast<std::size_t>(t)];
    }
  return out;
}

}  // namespace vqeq::baselines

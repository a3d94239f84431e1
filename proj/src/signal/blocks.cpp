#include "vqeq/signal/blocks.hpp"

#include "vqeq/signal/fft.hpp"
#include "vqeq/simd/kernels.hpp"

namespace vqeq::signal {

CVec overlap_save_filter(std::span<const cplx> prev_block, std::span<const cplx> cur_block,
                         std::span<const cplx> fd_filter) {
  const std::size_t m = cur_block.size();
  require_same_size(prev_block.size(), m, "overlap_save_filter(prev, cur)");
  require_same_size(fd_filter.size(), 2 * m, "overlap_save_filter(filter)");
  CVec buf(2 * m);
  std::copy(prev_block.begin(), prev_block.end(), buf.begin());
  std::copy(cur_block.begin(), cur_block.end(), buf.begin() + static_cast<std::ptrdiff_t>(m));
  fft_into(buf, buf);
  CVec prod(2 * m);
  simd::cmul_acc(prod, buf, fd_filter);
  ifft_into(prod, prod);
  return {prod.begin() + static_cast<std::ptrdiff_t>(m), prod.end()};
}

std::pair<DualPolBlock, DualPolBlock> split_even_odd(const DualPolBlock& block) {
  const std::size_t n = block.size();
  if (n % 2 != 0) throw ShapeError("split_even_odd: odd block length");
  DualPolBlock even(n / 2), odd(n / 2);
  even.block_index = odd.block_index = block.block_index;
  for (int p = 0; p < 2; ++p) {
    even.pol(p) = downsample2(block.pol(p), 0);
    odd.pol(p) = downsample2(block.pol(p), 1);
  }
  return {std::move(even), std::move(odd)};
}

DualPolBlock interleave(const DualPolBlock& even, const DualPolBlock& odd) {
  require_same_size(even.size(), odd.size(), "interleave");
  DualPolBlock out(2 * even.size());
  out.block_index = even.block_index;
  for (int p = 0; p < 2; ++p)
    for (std::size_t i = 0; i < even.size(); ++i) {
      out.pol(p)[2 * i] = even.pol(p)[i];
      out.pol(p)[2 * i + 1] = odd.pol(p)[i];
    }
  return out;
}

CVec upsample_zero_insert(std::span<const cplx> symbols) {
  CVec out(2 * symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) out[2 * i] = symbols[i];
  return out;
}

CVec downsample2(std::span<const cplx> samples, std::size_t phase) {
  CVec out;
  out.reserve(samples.size() / 2 + 1);
  for (std::size_t i = phase; i < samples.size(); i += 2) out.push_back(samples[i]);
  return out;
}

CVec convolve(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  CVec out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace vqeq::signal

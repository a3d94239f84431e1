#include "vqeq/eq/adam.hpp"

#include <cmath>

namespace vqeq::eq {

Adam::Adam(std::size_t n_params, AdamConfig cfg) : cfg_(cfg), m_(n_params), v_(n_params) {}

void Adam::step(std::span<cplx> params, std::span<const cplx> grads, double lr, std::size_t begin, std::size_t end) {
  require_same_size(params.size(), m_.size(), "adam params");
  require_same_size(grads.size(), m_.size(), "adam grads");
  if (begin > end || end > params.size()) throw ShapeError("adam: bad update range");
  ++step_count_;
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
  for (std::size_t i = begin; i < end; ++i) {
    const double gr = grads[i].real(), gi = grads[i].imag();
    const double mr = b1 * m_[i].real() + (1.0 - b1) * gr;
    const double mi = b1 * m_[i].imag() + (1.0 - b1) * gi;
    const double vr = b2 * v_[i].real() + (1.0 - b2) * gr * gr;
    const double vi = b2 * v_[i].imag() + (1.0 - b2) * gi * gi;
    m_[i] = {mr, mi};
    v_[i] = {vr, vi};
    const double dr = (mr / c1) / (std::sqrt(vr / c2) + cfg_.eps);
    const double di = (mi / c1) / (std::sqrt(vi / c2) + cfg_.eps);
    params[i] -= lr * cplx(dr, di);
  }
}

void Adam::restore(CVec m, CVec v, long step_count) {
  require_same_size(m.size(), v.size(), "adam restore");
  m_ = std::move(m);
  v_ = std::move(v);
  step_count_ = step_count;
}

}  // namespace vqeq::eq

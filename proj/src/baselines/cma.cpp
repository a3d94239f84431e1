#include "vqeq/baselines/cma.hpp"

#include <cmath>

namespace vqeq::baselines {
namespace {

DualPolBlock join(const DualPolBlock& a, const DualPolBlock& b) {
  DualPolBlock w(a.x, a.y);
  for (int p = 0; p < 2; ++p) w.pol(p).insert(w.pol(p).end(), b.pol(p).begin(), b.pol(p).end());
  return w;
}

void check_block(const CmaState& s, const DualPolBlock& r) {
  require_same_size(r.size(), s.prev.size(), "CMA block");
  if (r.size() % 2 != 0) throw ShapeError("CMA block: odd sample count");
}

void guard(CmaState& s, const DualPolBlock& u) {
  if (eq::output_power_out_of_range(u)) s.diverged = true;
  for (const auto& w : s.taps)
    if (!all_finite(w)) s.diverged = true;
}

}  // namespace

void CmaState::validate() const {
  if (!(step_size > 0.0) || !(base_step > 0.0)) throw ConfigError("CmaState: step size must be positive");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i].first <= schedule[i - 1].first) throw ConfigError("CmaState: schedule indices must increase");
  for (const auto& [k, mu] : schedule)
    if (!(mu > 0.0)) throw ConfigError("CmaState: scheduled step size must be positive");
  if (radius_targets.size() != 1) throw ConfigError("CmaState: exactly one radius target expected");
  const std::size_t k = taps[0].size();
  for (const auto& w : taps) require_same_size(w.size(), k, "CmaState taps");
  if (k == 0 || k > prev.size()) throw ConfigError("CmaState: taps must be 1..block_size long");
}

double godard_radius(const modem::Constellation& c) { return c.fourth_moment() / c.mean_power(); }

std::vector<std::pair<long, double>> halving_schedule(const CmaScheduleConfig& s) {
  if (!(s.mu0 > 0.0) || !(s.floor > 0.0) || s.halve_every <= 0) throw ConfigError("halving_schedule: bad parameters");
  std::vector<std::pair<long, double>> out;
  double mu = s.mu0;
  for (long k = 1; mu > s.floor; ++k) {
    mu = std::max(mu / 2.0, s.floor);
    out.emplace_back(k * s.halve_every, mu);
  }
  return out;
}

CmaState make_cma_state(std::size_t n_tap_td, std::size_t block_size, double r2, const CmaScheduleConfig& s) {
  if (n_tap_td < 2 || n_tap_td % 2 != 0) throw ConfigError("make_cma_state: n_tap_td must be even");
  CmaState st;
  for (auto& w : st.taps) w.assign(n_tap_td, cplx{});
  st.taps[0][n_tap_td / 2 + 1] = 1.0;
  st.taps[3][n_tap_td / 2 + 1] = 1.0;
  st.step_size = st.base_step = s.mu0;
  st.schedule = halving_schedule(s);
  st.radius_targets = {r2};
  st.prev = DualPolBlock(block_size);
  st.validate();
  return st;
}

double apply_schedule(CmaState& state, long update_index) {
  double mu = state.base_step;
  for (const auto& [k, m] : state.schedule) {
    if (k > update_index) break;
    mu = m;
  }
  state.step_size = mu;
  return mu;
}

std::array<cplx, 2> cma_output(const CmaTaps& w, const DualPolBlock& window, std::size_t anchor) {
  std::array<cplx, 2> u{};
  const std::size_t k = w[0].size();
  if (anchor + 1 < k || anchor >= window.size()) throw ShapeError("cma_output: window too short for the taps");
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      const CVec& t = w[static_cast<std::size_t>(p * 2 + q)];
      const CVec& x = window.pol(q);
      for (std::size_t j = 0; j < k; ++j) u[static_cast<std::size_t>(p)] += t[j] * x[anchor - j];
    }
  return u;
}

double cma_sample_cost(const CmaTaps& w, const DualPolBlock& window, std::size_t anchor, double r2) {
  const auto u = cma_output(w, window, anchor);
  double j = 0.0;
  for (const auto& v : u) j += (std::norm(v) - r2) * (std::norm(v) - r2);
  return j;
}

CmaTaps cma_sample_gradient(const CmaTaps& w, const DualPolBlock& window, std::size_t anchor, double r2) {
  const auto u = cma_output(w, window, anchor);
  CmaTaps g;
  const std::size_t k = w[0].size();
  for (int p = 0; p < 2; ++p) {
    const cplx e = 4.0 * (std::norm(u[static_cast<std::size_t>(p)]) - r2) * u[static_cast<std::size_t>(p)];
    for (int q = 0; q < 2; ++q) {
      CVec& gi = g[static_cast<std::size_t>(p * 2 + q)];
      gi.resize(k);
      for (std::size_t j = 0; j < k; ++j) gi[j] = e * std::conj(window.pol(q)[anchor - j]);
    }
  }
  return g;
}

DualPolBlock cma_forward(CmaState& state, const DualPolBlock& r_block) {
  check_block(state, r_block);
  const std::size_t n = r_block.size();
  const DualPolBlock win = join(state.prev, r_block);
  DualPolBlock u(n / 2);
  u.block_index = r_block.block_index;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto o = cma_output(state.taps, win, n + 2 * i + 1);
    u.x[i] = o[0];
    u.y[i] = o[1];
  }
  state.prev = DualPolBlock(r_block.x, r_block.y, r_block.block_index);
  guard(state, u);
  return u;
}

DualPolBlock cma_update(CmaState& state, const DualPolBlock& r_block) {
  check_block(state, r_block);
  const std::size_t n = r_block.size(), k = state.taps[0].size();
  const double r2 = state.radius_targets[0];
  const DualPolBlock win = join(state.prev, r_block);
  DualPolBlock u(n / 2);
  u.block_index = r_block.block_index;
  for (std::size_t i = 0; i < n / 2 && !state.diverged; ++i) {
    const std::size_t a = n + 2 * i + 1;
    const auto o = cma_output(state.taps, win, a);
    u.x[i] = o[0];
    u.y[i] = o[1];
    const double mu = apply_schedule(state, state.updates);
    for (int p = 0; p < 2; ++p) {
      const cplx e = mu * (std::norm(o[static_cast<std::size_t>(p)]) - r2) * o[static_cast<std::size_t>(p)];
      for (int q = 0; q < 2; ++q) {
        CVec& w = state.taps[static_cast<std::size_t>(p * 2 + q)];
        const CVec& x = win.pol(q);
        for (std::size_t j = 0; j < k; ++j) w[j] -= e * std::conj(x[a - j]);
      }
    }
    ++state.updates;
  }
  state.prev = DualPolBlock(r_block.x, r_block.y, r_block.block_index);
  guard(state, u);
  return u;
}

DualPolBlock cma_batch_update(CmaState& state, const DualPolBlock& r_block) {
  check_block(state, r_block);
  const std::size_t n = r_block.size(), k = state.taps[0].size(), m = n / 2;
  const double r2 = state.radius_targets[0];
  const DualPolBlock win = join(state.prev, r_block);
  DualPolBlock u(m);
  u.block_index = r_block.block_index;
  CmaTaps grad;
  for (auto& g : grad) g.assign(k, cplx{});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = n + 2 * i + 1;
    const auto o = cma_output(state.taps, win, a);
    u.x[i] = o[0];
    u.y[i] = o[1];
    for (int p = 0; p < 2; ++p) {
      const cplx e = (std::norm(o[static_cast<std::size_t>(p)]) - r2) * o[static_cast<std::size_t>(p)];
      for (int q = 0; q < 2; ++q) {
        CVec& g = grad[static_cast<std::size_t>(p * 2 + q)];
        const CVec& x = win.pol(q);
        for (std::size_t j = 0; j < k; ++j) g[j] += e * std::conj(x[a - j]);
      }
    }
  }
  const double mu = apply_schedule(state, state.updates);
  const double scale = mu / static_cast<double>(m);
  for (std::size_t f = 0; f < 4; ++f)
    for (std::size_t j = 0; j < k; ++j) state.taps[f][j] -= scale * grad[f][j];
  ++state.updates;
  state.prev = DualPolBlock(r_block.x, r_block.y, r_block.block_index);
  guard(state, u);
  return u;
}

eq::BlockResult CmaEqualizer::process(const DualPolBlock& r, bool adapt) {
  eq::BlockResult out;
  if (!adapt || state_.diverged)
    out.u_tilde = cma_forward(state_, r);
  else
    out.u_tilde = batch_ ? cma_batch_update(state_, r) : cma_update(state_, r);
  out.diverged = state_.diverged;
  return out;
}

}  // namespace vqeq::baselines

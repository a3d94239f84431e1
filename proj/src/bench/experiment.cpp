#include "vqeq/bench/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "vqeq/baselines/cma.hpp"
#include "vqeq/baselines/cpr.hpp"
#include "vqeq/eq/complexity.hpp"
#include "vqeq/eq/fd_vqvae.hpp"
#include "vqeq/eq/td_vqvae.hpp"
#include "vqeq/modem/demapper.hpp"

namespace vqeq::bench {
namespace {

bool is_vqvae(EqualizerKind k) { return k == EqualizerKind::fd_vqvae || k == EqualizerKind::td_vqvae; }

DualPolBlock slice(const DualPolBlock& b, std::size_t begin, std::size_t end) {
  DualPolBlock out;
  for (int p = 0; p < 2; ++p) out.pol(p).assign(b.pol(p).begin() + static_cast<std::ptrdiff_t>(begin), b.pol(p).begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

void put(DualPolBlock& dst, const DualPolBlock& src, std::size_t at) {
  for (int p = 0; p < 2; ++p) std::copy(src.pol(p).begin(), src.pol(p).end(), dst.pol(p).begin() + static_cast<std::ptrdiff_t>(at));
}

double symbol_cost(const DualPolBlock& u, std::size_t i, double r2) {
  double j = 0.0;
  for (int p = 0; p < 2; ++p) {
    const double e = std::norm(u.pol(p)[i]) - r2;
    j += e * e;
  }
  return j;
}

// Runs `fn(i)` for i in [0, n) on `parallel` threads, rethrowing the first failure.
template <class Fn>
void parallel_for(std::size_t n, int parallel, Fn fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, parallel));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

bool same_doubles(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) return false;
  return true;
}

}  // namespace

bool same_result(const RunRecord& a, const RunRecord& b) {
  const auto& x = a.ser;
  const auto& y = b.ser;
  return a.config_hash == b.config_hash && a.equalizer == b.equalizer && a.constellation == b.constellation &&
         a.seed == b.seed && a.snr_db == b.snr_db && x.symbol_errors == y.symbol_errors &&
         x.symbols_counted == y.symbols_counted && x.ser == y.ser && x.rotation_deg_x == y.rotation_deg_x &&
         x.rotation_deg_y == y.rotation_deg_y && x.pol_swap == y.pol_swap && x.delay == y.delay &&
         x.converged == y.converged && same_doubles(a.loss_trace, b.loss_trace) &&
         same_doubles(a.ser_trace, b.ser_trace) && a.ser_window_symbols == b.ser_window_symbols &&
         a.updates == b.updates && a.mults_per_symbol == b.mults_per_symbol && a.diverged == b.diverged;
}

std::unique_ptr<eq::BlockEqualizer> make_equalizer(const ExperimentConfig& cfg, EqualizerKind kind,
                                                   const modem::Constellation& c) {
  switch (kind) {
    case EqualizerKind::fd_vqvae: return std::make_unique<eq::FdVqVaeEqualizer>(cfg.train, c);
    case EqualizerKind::td_vqvae: return std::make_unique<eq::TdVqVaeEqualizer>(cfg.train, c);
    case EqualizerKind::cma:
    case EqualizerKind::cma_batch: {
      auto st = baselines::make_cma_state(cfg.train.n_tap_td(), cfg.train.block_size, baselines::godard_radius(c), cfg.cma);
      return std::make_unique<baselines::CmaEqualizer>(std::move(st), kind == EqualizerKind::cma_batch);
    }
  }
  throw ConfigError("make_equalizer: unknown kind");
}

long mults_per_symbol(const ExperimentConfig& cfg, EqualizerKind kind) {
  const auto n_tap = static_cast<long>(cfg.train.n_tap_td());
  if (kind == EqualizerKind::fd_vqvae) return eq::count_inference_mults(eq::EqualizerDomain::fd, n_tap / 2);
  return eq::count_inference_mults(eq::EqualizerDomain::td, n_tap);
}

RunRecord run_cell(const ExperimentConfig& cfg, const modem::Constellation& c, EqualizerKind kind, double snr_db,
                   std::uint64_t seed, const Transmission& tx) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = cfg.train.block_size, spb = n / 2;
  const auto train_blocks = static_cast<std::size_t>((cfg.n_train_symbols + static_cast<long>(spb) - 1) / static_cast<long>(spb));
  const auto total_blocks = static_cast<std::size_t>((cfg.n_total_symbols() + static_cast<long>(spb) - 1) / static_cast<long>(spb));
  const std::size_t len = total_blocks * spb;
  if (len > tx.symbols.size()) throw ShapeError("run_cell: transmission shorter than the experiment");

  RunRecord rec;
  rec.config_hash = config_hash(cfg);
  rec.equalizer = to_string(kind);
  rec.constellation = to_string(cfg.constellation);
  rec.seed = seed;
  rec.snr_db = snr_db;
  rec.ser_window_symbols = cfg.trace_window_symbols;
  rec.mults_per_symbol = mults_per_symbol(cfg, kind);

  auto eqz = make_equalizer(cfg, kind, c);
  const double r2 = baselines::godard_radius(c);
  DualPolBlock outputs(len), decided(len);
  std::vector<std::size_t> update_end;  // symbols decided when each update happened
  const std::size_t warmup = cfg.train.warmup_blocks();

  for (std::size_t k = 0; k < total_blocks; ++k) {
    const DualPolBlock r = slice(tx.received, k * n, (k + 1) * n);
    const bool adapt = k >= warmup && !(cfg.freeze_taps && k >= train_blocks);
    const long before = eqz->updates();
    const eq::BlockResult res = eqz->process(r, adapt);
    const long done = eqz->updates() - before;
    put(outputs, res.u_tilde, k * spb);
    if (is_vqvae(kind)) {
      put(decided, res.u_hat, k * spb);
      if (done > 0) {
        rec.loss_trace.push_back(res.loss);
        update_end.push_back((k + 1) * spb);
      }
    } else if (kind == EqualizerKind::cma_batch) {
      if (done > 0) {
        double j = 0.0;
        for (std::size_t i = 0; i < spb; ++i) j += symbol_cost(res.u_tilde, i, r2);
        rec.loss_trace.push_back(j / static_cast<double>(spb));
        update_end.push_back((k + 1) * spb);
      }
    } else {
      for (std::size_t i = 0; i < static_cast<std::size_t>(done); ++i) {
        rec.loss_trace.push_back(symbol_cost(res.u_tilde, i, r2));
        update_end.push_back(k * spb + i + 1);
      }
    }
  }
  rec.updates = eqz->updates();
  rec.diverged = eqz->diverged();

  const DualPolBlock truth = slice(tx.symbols, 0, len);
  const std::size_t skip = train_blocks * spb;
  modem::ErrorFlags flags;
  if (is_vqvae(kind)) {
    rec.ser = modem::measure_ser(decided, truth, skip, cfg.max_delay);
    modem::Alignment a;
    a.pol_swap = rec.ser.pol_swap;
    a.delay = rec.ser.delay;
    a.quarter_turns[0] = rec.ser.rotation_deg_x / 90;
    a.quarter_turns[1] = rec.ser.rotation_deg_y / 90;
    flags = modem::error_flags(decided, truth, a);
  } else {
    // Baselines: resolve the pol/delay ambiguity by correlation, then genie phase per block.
    const auto md = static_cast<std::size_t>(cfg.max_delay);
    const auto pa = baselines::align_by_correlation(outputs, truth, skip + md, len - md, cfg.max_delay);
    const DualPolBlock at = baselines::aligned_truth(truth, pa, 0, len);
    modem::NoiseVarianceTracker noise;
    for (std::size_t k = 0; k < total_blocks; ++k) {
      const DualPolBlock rot = baselines::genie_cpr(slice(outputs, k * spb, (k + 1) * spb), slice(at, k * spb, (k + 1) * spb));
      DualPolBlock dec(spb);
      for (int p = 0; p < 2; ++p) modem::map_demap_into(rot.pol(p), c, noise.value(), dec.pol(p));
      CVec both_u(rot.x), both_d(dec.x);
      both_u.insert(both_u.end(), rot.y.begin(), rot.y.end());
      both_d.insert(both_d.end(), dec.y.begin(), dec.y.end());
      noise.update(both_u, both_d);
      put(decided, dec, k * spb);
    }
    rec.ser = modem::count_errors(decided, at, modem::Alignment{}, skip + md, len - md);
    rec.ser.pol_swap = pa.source[0] == 1;
    rec.ser.delay = pa.delay[0];
    flags = modem::error_flags(decided, at, modem::Alignment{});
  }

  // Running SER over the last trace_window_symbols decided symbols at each update.
  std::vector<long> cum_err(len + 1, 0), cum_cnt(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) {
    cum_err[i + 1] = cum_err[i] + flags.errors[i];
    cum_cnt[i + 1] = cum_cnt[i] + flags.counted[i];
  }
  const auto w = static_cast<std::size_t>(cfg.trace_window_symbols);
  rec.ser_trace.reserve(update_end.size());
  for (std::size_t e : update_end) {
    if (e < w) {
      rec.ser_trace.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const long cnt = cum_cnt[e] - cum_cnt[e - w];
    rec.ser_trace.push_back(cnt ? static_cast<double>(cum_err[e] - cum_err[e - w]) / static_cast<double>(cnt) : 1.0);
  }
  rec.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<RunRecord> run_ser_sweep(const ExperimentConfig& cfg, int parallel) {
  cfg.validate();
  const modem::Constellation c = cfg.make_constellation();
  struct Cell {
    EqualizerKind kind;
    double snr;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (auto k : cfg.equalizers)
    for (double snr : cfg.snr_grid_db)
      for (auto s : cfg.seeds) cells.push_back({k, snr, s});
  std::vector<RunRecord> out(cells.size());
  const auto n_sym = static_cast<std::size_t>(cfg.n_total_symbols());
  parallel_for(cells.size(), parallel, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const Transmission tx = simulate_transmission(cfg, c, cell.snr, cell.seed, n_sym);
    out[i] = run_cell(cfg, c, cell.kind, cell.snr, cell.seed, tx);
  });
  return out;
}

std::vector<RunRecord> run_convergence_trace(const ExperimentConfig& cfg, int parallel) {
  cfg.validate();
  const modem::Constellation c = cfg.make_constellation();
  std::vector<std::pair<EqualizerKind, std::uint64_t>> cells;
  for (auto k : cfg.equalizers)
    for (auto s : cfg.seeds) cells.emplace_back(k, s);
  std::vector<RunRecord> out(cells.size());
  const auto n_sym = static_cast<std::size_t>(cfg.n_total_symbols());
  parallel_for(cells.size(), parallel, [&](std::size_t i) {
    const Transmission tx = simulate_transmission(cfg, c, cfg.channel.snr_db, cells[i].second, n_sym);
    out[i] = run_cell(cfg, c, cells[i].first, cfg.channel.snr_db, cells[i].second, tx);
  });
  return out;
}

std::pair<double, double> wilson_interval(long errors, long trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<SweepPoint> summarize_sweep(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, double>, SweepPoint> acc;
  std::vector<std::pair<std::string, double>> order;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.equalizer, r.snr_db);
    auto [it, fresh] = acc.try_emplace(key);
    if (fresh) order.push_back(key);
    SweepPoint& pt = it->second;
    pt.equalizer = r.equalizer;
    pt.constellation = r.constellation;
    pt.snr_db = r.snr_db;
    ++pt.n_seeds;
    if (r.ser.converged) ++pt.n_converged;
    pt.symbol_errors += r.ser.symbol_errors;
    pt.symbols_counted += r.ser.symbols_counted;
  }
  std::vector<SweepPoint> out;
  for (const auto& key : order) {
    SweepPoint pt = acc[key];
    pt.ser = pt.symbols_counted ? static_cast<double>(pt.symbol_errors) / static_cast<double>(pt.symbols_counted) : 1.0;
    std::tie(pt.ci_low, pt.ci_high) = wilson_interval(pt.symbol_errors, pt.symbols_counted);
    out.push_back(pt);
  }
  return out;
}

long updates_to_threshold(const RunRecord& r, double threshold) {
  for (std::size_t i = 0; i < r.ser_trace.size(); ++i)
    if (!std::isnan(r.ser_trace[i]) && r.ser_trace[i] <= threshold) return static_cast<long>(i) + 1;
  return -1;
}

int exit_status(const std::vector<RunRecord>& records) {
  if (records.empty()) return 0;
  for (const auto& r : records)
    if (!r.diverged) return 0;
  return 3;
}

}  // namespace vqeq::bench

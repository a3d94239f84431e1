#pragma once
// SER sweeps and convergence traces.

#include <memory>

#include "vqeq/bench/config.hpp"
#include "vqeq/bench/simulate.hpp"
#include "vqeq/eq/equalizer.hpp"
#include "vqeq/modem/ser.hpp"

namespace vqeq::bench {

inline constexpr int kRecordSchemaVersion = 1;

/// One (equalizer, snr, seed) cell.
struct RunRecord {
  std::string config_hash;
  std::string equalizer;
  std::string constellation;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  modem::SerReport ser;               // evaluation symbols only
  std::vector<double> loss_trace;     // one entry per gradient update
  std::vector<double> ser_trace;      // running SER after each update (NaN until the window fills)
  long ser_window_symbols = 0;
  long updates = 0;
  long mults_per_symbol = 0;
  bool diverged = false;
  double wall_clock_s = 0.0;  // not part of the result identity
};

/// Field-wise equality ignoring wall-clock time (NaN entries compare equal to NaN).
[[nodiscard]] bool same_result(const RunRecord& a, const RunRecord& b);

[[nodiscard]] std::unique_ptr<eq::BlockEqualizer> make_equalizer(const ExperimentConfig& cfg, EqualizerKind kind,
                                                                 const modem::Constellation& c);
[[nodiscard]] long mults_per_symbol(const ExperimentConfig& cfg, EqualizerKind kind);

/// Trains on n_train_symbols, then measures SER on the next n_eval_symbols (continuing to adapt
/// unless freeze_taps). Deterministic in (cfg, kind, snr, seed).
[[nodiscard]] RunRecord run_cell(const ExperimentConfig& cfg, const modem::Constellation& c, EqualizerKind kind,
                                 double snr_db, std::uint64_t seed, const Transmission& tx);

/// Every (equalizer, snr, seed) cell; `parallel` worker threads, output order fixed by cell key.
[[nodiscard]] std::vector<RunRecord> run_ser_sweep(const ExperimentConfig& cfg, int parallel = 1);

/// Every (equalizer, seed) at cfg.channel.snr_db on identical data per seed.
[[nodiscard]] std::vector<RunRecord> run_convergence_trace(const ExperimentConfig& cfg, int parallel = 1);

/// Seed-pooled SER per (equalizer, snr) with a 95% Wilson interval.
struct SweepPoint {
  std::string equalizer;
  std::string constellation;
  double snr_db = 0.0;
  int n_seeds = 0;
  int n_converged = 0;
  long symbol_errors = 0;
  long symbols_counted = 0;
  double ser = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};
[[nodiscard]] std::vector<SweepPoint> summarize_sweep(const std::vector<RunRecord>& records);
[[nodiscard]] std::pair<double, double> wilson_interval(long errors, long trials, double z = 1.959963984540054);

/// First update index (1-based count) at which the running SER is <= threshold; -1 if never.
[[nodiscard]] long updates_to_threshold(const RunRecord& r, double threshold);

/// Exit status for a set of records: 3 when every record diverged, else 0.
[[nodiscard]] int exit_status(const std::vector<RunRecord>& records);

}  // namespace vqeq::bench

// vqeq_bench: SER sweeps, convergence traces and complexity tables.
//
//   vqeq_bench sweep      --config cfg.toml --out results/ [--seed 7] [--parallel 4]
//   vqeq_bench trace      --config cfg.toml --out results/
//   vqeq_bench complexity --out results/ [--n-tap 4,8,16,32,64]
//
// Exit codes: 0 success, 2 configuration error, 3 every run diverged.

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vqeq/bench/record.hpp"
#include "vqeq/eq/complexity.hpp"

namespace {

using namespace vqeq;

struct Options {
  std::string config;
  std::string out = "results";
  std::optional<std::uint64_t> seed;
  int parallel = 1;
  std::vector<long> n_tap{4, 8, 16, 32, 64};
};

bench::ExperimentConfig load(const Options& o) {
  bench::ExperimentConfig cfg = o.config.empty() ? bench::ExperimentConfig{} : bench::load_config(o.config);
  if (o.seed) cfg.seeds = {*o.seed};
  cfg.validate();
  return cfg;
}

int do_sweep(const Options& o) {
  const auto cfg = load(o);
  const auto records = bench::run_ser_sweep(cfg, o.parallel);
  const auto summary = bench::summarize_sweep(records);
  const std::filesystem::path out(o.out);
  std::ostringstream csv, sum;
  bench::write_sweep_csv(csv, records);
  bench::write_summary_csv(sum, summary);
  bench::write_file(out / "sweep.csv", csv.str());
  bench::write_file(out / "sweep_summary.csv", sum.str());
  bench::write_file(out / "sweep.json", bench::records_document(cfg, records, "sweep").dump(1));
  std::cout << "config " << bench::config_hash(cfg) << ", " << records.size() << " cells\n";
  for (const auto& p : summary)
    std::cout << p.equalizer << " snr=" << p.snr_db << " ser=" << p.ser << " [" << p.ci_low << ", " << p.ci_high
              << "] converged " << p.n_converged << "/" << p.n_seeds << '\n';
  return bench::exit_status(records);
}

int do_trace(const Options& o) {
  const auto cfg = load(o);
  const auto records = bench::run_convergence_trace(cfg, o.parallel);
  const std::filesystem::path out(o.out);
  std::ostringstream csv;
  bench::write_trace_csv(csv, records);
  bench::write_file(out / "trace.csv", csv.str());
  bench::write_file(out / "trace.json", bench::records_document(cfg, records, "trace").dump(1));
  std::cout << "config " << bench::config_hash(cfg) << ", window " << cfg.trace_window_symbols << " symbols\n";
  for (const auto& r : records)
    std::cout << r.equalizer << " seed=" << r.seed << " final_ser=" << r.ser.ser << " updates=" << r.updates
              << " to_2x_final=" << bench::updates_to_threshold(r, 2.0 * r.ser.ser) << '\n';
  return bench::exit_status(records);
}

int do_complexity(const Options& o) {
  const std::string csv = eq::emit_complexity_table(o.n_tap);
  bench::write_file(std::filesystem::path(o.out) / "complexity.csv", csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VQ-VAE / CMA blind equalization bench"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) {
      sub->add_option("--config", o.config, "experiment config (TOML subset or JSON)")->check(CLI::ExistingFile);
      sub->add_option("--seed", o.seed, "run a single seed instead of the configured list");
      sub->add_option("--parallel", o.parallel, "worker threads")->check(CLI::PositiveNumber);
    }
    sub->add_option("--out", o.out, "output directory");
  };
  auto* sweep = app.add_subcommand("sweep", "SER versus SNR");
  add_common(sweep, true);
  auto* trace = app.add_subcommand("trace", "running SER versus gradient updates");
  add_common(trace, true);
  auto* cx = app.add_subcommand("complexity", "multiplications per symbol, TD vs FD");
  add_common(cx, false);
  cx->add_option("--n-tap", o.n_tap, "TD tap counts")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*sweep) return do_sweep(o);
    if (*trace) return do_trace(o);
    return do_complexity(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
}

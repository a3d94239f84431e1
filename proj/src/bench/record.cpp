#include "vqeq/bench/record.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace vqeq::bench {
namespace {

nlohmann::json nullable(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double d : v) {
    if (std::isfinite(d))
      a.push_back(d);
    else
      a.push_back(nullptr);
  }
  return a;
}

}  // namespace

nlohmann::json to_json(const RunRecord& r, bool include_wall_clock) {
  nlohmann::json j{{"schema_version", kRecordSchemaVersion},
                   {"config_hash", r.config_hash},
                   {"equalizer", r.equalizer},
                   {"constellation", r.constellation},
                   {"seed", r.seed},
                   {"snr_db", r.snr_db},
                   {"ser",
                    {{"symbol_errors", r.ser.symbol_errors},
                     {"symbols_counted", r.ser.symbols_counted},
                     {"ser", r.ser.ser},
                     {"rotation_deg_x", r.ser.rotation_deg_x},
                     {"rotation_deg_y", r.ser.rotation_deg_y},
                     {"pol_swap", r.ser.pol_swap},
                     {"delay", r.ser.delay},
                     {"converged", r.ser.converged}}},
                   {"loss_trace", nullable(r.loss_trace)},
                   {"ser_trace", nullable(r.ser_trace)},
                   {"ser_window_symbols", r.ser_window_symbols},
                   {"updates", r.updates},
                   {"mults_per_symbol", r.mults_per_symbol},
                   {"diverged", r.diverged}};
  if (include_wall_clock) j["wall_clock_s"] = r.wall_clock_s;
  return j;
}

nlohmann::json records_document(const ExperimentConfig& cfg, const std::vector<RunRecord>& records,
                                const std::string& kind) {
  nlohmann::json j{{"schema_version", kRecordSchemaVersion},
                   {"kind", kind},
                   {"config_hash", config_hash(cfg)},
                   {"config", to_json(cfg)},
                   {"trace_window_symbols", cfg.trace_window_symbols}};
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) j["records"].push_back(to_json(r));
  return j;
}

void write_sweep_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kSweepCsvHeader << '\n' << std::setprecision(17);
  for (const auto& r : records)
    os << kRecordSchemaVersion << ',' << r.config_hash << ',' << r.equalizer << ',' << r.constellation << ','
       << r.snr_db << ',' << r.seed << ',' << r.ser.symbols_counted << ',' << r.ser.symbol_errors << ',' << r.ser.ser
       << ',' << int(r.ser.converged) << ',' << int(r.ser.pol_swap) << ',' << r.ser.delay << ',' << r.ser.rotation_deg_x
       << ',' << r.ser.rotation_deg_y << ',' << r.updates << ',' << int(r.diverged) << ',' << r.mults_per_symbol << '\n';
}

void write_summary_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << kSummaryCsvHeader << '\n' << std::setprecision(17);
  for (const auto& p : points)
    os << kRecordSchemaVersion << ',' << p.equalizer << ',' << p.constellation << ',' << p.snr_db << ',' << p.n_seeds
       << ',' << p.n_converged << ',' << p.symbols_counted << ',' << p.symbol_errors << ',' << p.ser << ',' << p.ci_low
       << ',' << p.ci_high << '\n';
}

void write_trace_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kTraceCsvHeader << '\n' << std::setprecision(17);
  for (const auto& r : records)
    for (std::size_t i = 0; i < r.loss_trace.size(); ++i) {
      os << kRecordSchemaVersion << ',' << r.config_hash << ',' << r.equalizer << ',' << r.seed << ',' << r.snr_db << ','
         << i + 1 << ',' << r.loss_trace[i] << ',';
      if (i < r.ser_trace.size() && std::isfinite(r.ser_trace[i])) os << r.ser_trace[i];
      os << ',' << r.ser_window_symbols << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace vqeq::bench

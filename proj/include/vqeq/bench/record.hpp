#pragma once
// RunRecord serialization. Every CSV starts with a fixed header; JSON documents carry
// "schema_version" and the config hash.

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "vqeq/bench/experiment.hpp"

namespace vqeq::bench {

/// Column sets (stable; covered by a golden-file test).
inline constexpr const char* kSweepCsvHeader =
    "schema_version,config_hash,equalizer,constellation,snr_db,seed,symbols_counted,symbol_errors,ser,converged,"
    "pol_swap,delay,rotation_deg_x,rotation_deg_y,updates,diverged,mults_per_symbol";
inline constexpr const char* kSummaryCsvHeader =
    "schema_version,equalizer,constellation,snr_db,n_seeds,n_converged,symbols_counted,symbol_errors,ser,ci95_low,"
    "ci95_high";
inline constexpr const char* kTraceCsvHeader =
    "schema_version,config_hash,equalizer,seed,snr_db,update,loss,ser_window,window_symbols";

/// NaN trace entries become null. Wall-clock time is included only on request.
[[nodiscard]] nlohmann::json to_json(const RunRecord& r, bool include_wall_clock = true);
[[nodiscard]] nlohmann::json records_document(const ExperimentConfig& cfg, const std::vector<RunRecord>& records,
                                              const std::string& kind);

void write_sweep_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SweepPoint>& points);
void write_trace_csv(std::ostream& os, const std::vector<RunRecord>& records);

/// Writes text to a file, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace vqeq::bench

#pragma once
// Experiment configuration and its file format.
//
// Files are either JSON (first non-blank character '{') or a TOML subset:
//   # comment
//   [section]
//   key = 1.5 | 42 | true | "text" | [1, 2, 3] | ["a", "b"]
// Sections: channel, constellation, equalizer, train, experiment. Unknown sections or keys
// are rejected. See README.md for the key list.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqeq/baselines/cma.hpp"
#include "vqeq/channel/channel.hpp"
#include "vqeq/eq/config.hpp"
#include "vqeq/modem/constellation.hpp"

namespace vqeq::bench {

enum class ConstellationKind { uniform64, pcs64 };
enum class EqualizerKind { fd_vqvae, td_vqvae, cma, cma_batch };

[[nodiscard]] std::string to_string(ConstellationKind k);
[[nodiscard]] std::string to_string(EqualizerKind k);
[[nodiscard]] EqualizerKind equalizer_kind_from_string(const std::string& s);
[[nodiscard]] ConstellationKind constellation_kind_from_string(const std::string& s);

struct ExperimentConfig {
  channel::ChannelConfig channel;
  double rrc_rolloff = 0.1;
  int rrc_span = 32;  // symbols

  ConstellationKind constellation = ConstellationKind::pcs64;
  double pcs_entropy_bits = 5.0;

  std::vector<EqualizerKind> equalizers{EqualizerKind::fd_vqvae, EqualizerKind::td_vqvae, EqualizerKind::cma_batch};
  baselines::CmaScheduleConfig cma;

  eq::TrainConfig train = [] {
    eq::TrainConfig t;
    t.block_size = 64;
    return t;
  }();

  long n_train_symbols = 128000;  // 4000 blocks at N = 64
  long n_eval_symbols = 16384;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<double> snr_grid_db{10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  bool freeze_taps = false;  // stop adapting during evaluation
  int max_delay = 16;        // symbols searched by the SER genie
  long trace_window_symbols = 2048;

  void validate() const;
  [[nodiscard]] modem::Constellation make_constellation() const;
  [[nodiscard]] long n_total_symbols() const { return n_train_symbols + n_eval_symbols; }
};

/// Resets the constellation-dependent defaults: block size (32 uniform, 64 PCS), 4000
/// training blocks, and the SNR grid (14..24 dB uniform, 10..20 dB PCS).
void apply_constellation_defaults(ExperimentConfig& cfg);

/// Canonical JSON form (every field, fixed key order).
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& cfg);
/// Builds a config from a sectioned JSON object; missing keys keep defaults, unknown keys throw.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);

/// Parses the TOML subset into a sectioned JSON object.
[[nodiscard]] nlohmann::json parse_toml_subset(const std::string& text);
[[nodiscard]] ExperimentConfig parse_config_text(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// 16-hex-digit FNV-1a hash of the canonical JSON dump.
[[nodiscard]] std::string config_hash(const ExperimentConfig& cfg);

}  // namespace vqeq::bench

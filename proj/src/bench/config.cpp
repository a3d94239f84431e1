#include "vqeq/bench/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vqeq::bench {
namespace {

using nlohmann::json;

const std::vector<double> kUniformGrid{14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24};
const std::vector<double> kPcsGrid{10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
constexpr long kDefaultTrainBlocks = 4000;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing '#' comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && in_str) {
      ++i;
      continue;
    }
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

json parse_scalar(const std::string& raw, int line) {
  const std::string v = trim(raw);
  auto fail = [&](const std::string& why) {
    return ConfigError("config line " + std::to_string(line) + ": " + why + " '" + v + "'");
  };
  if (v.empty()) throw fail("missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) ++i;
      out += v[i];
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  const bool is_float = v.find_first_of(".eE") != std::string::npos || v == "inf" || v == "+inf" || v == "-inf";
  std::size_t used = 0;
  try {
    if (is_float) {
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } else {
      const long long i = std::stoll(v, &used);
      if (used == v.size()) return i;
    }
  } catch (const std::exception&) {
  }
  throw fail("cannot parse value");
}

json parse_value(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty() || v.front() != '[') return parse_scalar(v, line);
  if (v.back() != ']') throw ConfigError("config line " + std::to_string(line) + ": unterminated array");
  json arr = json::array();
  std::string cur;
  bool in_str = false;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const char c = v[i];
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      arr.push_back(parse_scalar(cur, line));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) arr.push_back(parse_scalar(cur, line));
  return arr;
}

void reject_unknown(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config: section [" + section + "] must be a table");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("config: unknown key '" + k + "' in [" + section + "]");
}

template <class T>
void take(const json& obj, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  try {
    dst = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad type for '") + key + "': " + e.what());
  }
}

void take_size(const json& obj, const char* key, std::size_t& dst) {
  long v = static_cast<long>(dst);
  take(obj, key, v);
  if (v < 0) throw ConfigError(std::string("config: '") + key + "' must be non-negative");
  dst = static_cast<std::size_t>(v);
}

std::vector<std::string> string_or_list(const json& v, const char* key) {
  if (v.is_string()) return {v.get<std::string>()};
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw ConfigError(std::string("config: '") + key + "' entries must be strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  throw ConfigError(std::string("config: '") + key + "' must be a string or a list of strings");
}

}  // namespace

std::string to_string(ConstellationKind k) { return k == ConstellationKind::uniform64 ? "uniform64" : "pcs64"; }

std::string to_string(EqualizerKind k) {
  switch (k) {
    case EqualizerKind::fd_vqvae: return "fd_vqvae";
    case EqualizerKind::td_vqvae: return "td_vqvae";
    case EqualizerKind::cma: return "cma";
    case EqualizerKind::cma_batch: return "cma_batch";
  }
  return "?";
}

EqualizerKind equalizer_kind_from_string(const std::string& s) {
  for (auto k : {EqualizerKind::fd_vqvae, EqualizerKind::td_vqvae, EqualizerKind::cma, EqualizerKind::cma_batch})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown equalizer '" + s + "'");
}

ConstellationKind constellation_kind_from_string(const std::string& s) {
  if (s == "uniform64") return ConstellationKind::uniform64;
  if (s == "pcs64") return ConstellationKind::pcs64;
  throw ConfigError("unknown constellation '" + s + "'");
}

void ExperimentConfig::validate() const {
  channel.validate();
  if (channel.sps != 2) throw ConfigError("channel: only sps = 2 is supported");
  if (!(rrc_rolloff > 0.0 && rrc_rolloff <= 1.0)) throw ConfigError("channel: rrc_rolloff must lie in (0, 1]");
  if (rrc_span < 2 || rrc_span % 2 != 0) throw ConfigError("channel: rrc_span must be even and >= 2");
  if (constellation == ConstellationKind::pcs64 && !(pcs_entropy_bits > 0.0 && pcs_entropy_bits < 6.0))
    throw ConfigError("constellation: entropy_bits must lie in (0, 6)");
  if (equalizers.empty()) throw ConfigError("equalizer: at least one kind required");
  train.validate();
  if (!(cma.mu0 > 0.0) || !(cma.floor > 0.0) || cma.halve_every <= 0)
    throw ConfigError("equalizer: cma schedule parameters must be positive");
  if (n_train_symbols < 0) throw ConfigError("experiment: n_train_symbols must be >= 0");
  if (n_eval_symbols < 10000) throw ConfigError("experiment: n_eval_symbols must be >= 10000");
  if (seeds.empty()) throw ConfigError("experiment: at least one seed required");
  if (snr_grid_db.empty()) throw ConfigError("experiment: snr_grid_db must not be empty");
  for (double s : snr_grid_db)
    if (std::isnan(s)) throw ConfigError("experiment: snr_grid_db entries must be numbers");
  if (max_delay < 0) throw ConfigError("experiment: max_delay must be >= 0");
  if (trace_window_symbols <= 0) throw ConfigError("experiment: trace_window_symbols must be > 0");
}

modem::Constellation ExperimentConfig::make_constellation() const {
  if (constellation == ConstellationKind::uniform64) return modem::make_uniform_qam(64);
  return modem::make_pcs_qam({pcs_entropy_bits, 64});
}

void apply_constellation_defaults(ExperimentConfig& c) {
  const bool uniform = c.constellation == ConstellationKind::uniform64;
  c.train.block_size = uniform ? 32 : 64;
  c.n_train_symbols = kDefaultTrainBlocks * static_cast<long>(c.train.symbols_per_block());
  c.snr_grid_db = uniform ? kUniformGrid : kPcsGrid;
}

json to_json(const ExperimentConfig& c) {
  json eqs = json::array();
  for (auto k : c.equalizers) eqs.push_back(to_string(k));
  return json{
      {"channel",
       {{"gamma", c.channel.gamma},
        {"d_pmd", c.channel.d_pmd},
        {"fiber_length_km", c.channel.fiber_length_km},
        {"beta", c.channel.beta},
        {"l_cd_km", c.channel.l_cd_km},
        {"snr_db", c.channel.snr_db},
        {"symbol_rate_gbaud", c.channel.symbol_rate_gbaud},
        {"sps", c.channel.sps},
        {"rrc_rolloff", c.rrc_rolloff},
        {"rrc_span", c.rrc_span}}},
      {"constellation", {{"kind", to_string(c.constellation)}, {"entropy_bits", c.pcs_entropy_bits}}},
      {"equalizer",
       {{"kind", eqs}, {"cma_mu0", c.cma.mu0}, {"cma_halve_every", c.cma.halve_every}, {"cma_floor", c.cma.floor}}},
      {"train",
       {{"rho", c.train.rho},
        {"learning_rate", c.train.learning_rate},
        {"adam_beta1", c.train.adam.beta1},
        {"adam_beta2", c.train.adam.beta2},
        {"adam_eps", c.train.adam.eps},
        {"block_size", c.train.block_size},
        {"n_tap_fd", c.train.n_tap_fd},
        {"n_tap_enc", c.train.n_tap_enc},
        {"mode", eq::to_string(c.train.mode)},
        {"gradient", eq::to_string(c.train.gradient)}}},
      {"experiment",
       {{"n_train_symbols", c.n_train_symbols},
        {"n_eval_symbols", c.n_eval_symbols},
        {"seeds", c.seeds},
        {"snr_grid_db", c.snr_grid_db},
        {"freeze_taps", c.freeze_taps},
        {"max_delay", c.max_delay},
        {"trace_window_symbols", c.trace_window_symbols}}}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a table");
  reject_unknown(j, "top level", {"channel", "constellation", "equalizer", "train", "experiment"});
  ExperimentConfig c;
  const json empty = json::object();
  const json& ch = j.contains("channel") ? j["channel"] : empty;
  reject_unknown(ch, "channel",
                 {"gamma", "d_pmd", "fiber_length_km", "beta", "l_cd_km", "snr_db", "symbol_rate_gbaud", "sps",
                  "rrc_rolloff", "rrc_span"});
  take(ch, "gamma", c.channel.gamma);
  take(ch, "d_pmd", c.channel.d_pmd);
  take(ch, "fiber_length_km", c.channel.fiber_length_km);
  take(ch, "beta", c.channel.beta);
  take(ch, "l_cd_km", c.channel.l_cd_km);
  take(ch, "snr_db", c.channel.snr_db);
  take(ch, "symbol_rate_gbaud", c.channel.symbol_rate_gbaud);
  take(ch, "sps", c.channel.sps);
  take(ch, "rrc_rolloff", c.rrc_rolloff);
  take(ch, "rrc_span", c.rrc_span);

  const json& co = j.contains("constellation") ? j["constellation"] : empty;
  reject_unknown(co, "constellation", {"kind", "entropy_bits"});
  if (co.contains("kind")) c.constellation = constellation_kind_from_string(co["kind"].get<std::string>());
  apply_constellation_defaults(c);
  take(co, "entropy_bits", c.pcs_entropy_bits);

  const json& eqs = j.contains("equalizer") ? j["equalizer"] : empty;
  reject_unknown(eqs, "equalizer", {"kind", "cma_mu0", "cma_halve_every", "cma_floor"});
  if (eqs.contains("kind")) {
    c.equalizers.clear();
    for (const auto& s : string_or_list(eqs["kind"], "kind")) c.equalizers.push_back(equalizer_kind_from_string(s));
  }
  take(eqs, "cma_mu0", c.cma.mu0);
  take(eqs, "cma_halve_every", c.cma.halve_every);
  take(eqs, "cma_floor", c.cma.floor);

  const json& tr = j.contains("train") ? j["train"] : empty;
  reject_unknown(tr, "train",
                 {"rho", "learning_rate", "adam_beta1", "adam_beta2", "adam_eps", "block_size", "n_tap_fd", "n_tap_enc",
                  "mode", "gradient"});
  take(tr, "rho", c.train.rho);
  take(tr, "learning_rate", c.train.learning_rate);
  take(tr, "adam_beta1", c.train.adam.beta1);
  take(tr, "adam_beta2", c.train.adam.beta2);
  take(tr, "adam_eps", c.train.adam.eps);
  take_size(tr, "block_size", c.train.block_size);
  c.n_train_symbols = kDefaultTrainBlocks * static_cast<long>(c.train.symbols_per_block());
  take_size(tr, "n_tap_fd", c.train.n_tap_fd);
  take_size(tr, "n_tap_enc", c.train.n_tap_enc);
  if (tr.contains("mode")) c.train.mode = eq::train_mode_from_string(tr["mode"].get<std::string>());
  if (tr.contains("gradient"))
    c.train.gradient = eq::gradient_estimator_from_string(tr["gradient"].get<std::string>());

  const json& ex = j.contains("experiment") ? j["experiment"] : empty;
  reject_unknown(ex, "experiment",
                 {"n_train_symbols", "n_eval_symbols", "seeds", "snr_grid_db", "freeze_taps", "max_delay",
                  "trace_window_symbols"});
  take(ex, "n_train_symbols", c.n_train_symbols);
  take(ex, "n_eval_symbols", c.n_eval_symbols);
  take(ex, "seeds", c.seeds);
  take(ex, "snr_grid_db", c.snr_grid_db);
  take(ex, "freeze_taps", c.freeze_taps);
  take(ex, "max_delay", c.max_delay);
  take(ex, "trace_window_symbols", c.trace_window_symbols);

  c.validate();
  return c;
}

json parse_toml_subset(const std::string& text) {
  json root = json::object();
  json* section = nullptr;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw ConfigError("config line " + std::to_string(line) + ": bad section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (root.contains(name)) throw ConfigError("config line " + std::to_string(line) + ": duplicate section [" + name + "]");
      root[name] = json::object();
      section = &root[name];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    if (section == nullptr) throw ConfigError("config line " + std::to_string(line) + ": key outside a section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line) + ": empty key");
    if (section->contains(key)) throw ConfigError("config line " + std::to_string(line) + ": duplicate key '" + key + "'");
    (*section)[key] = parse_value(s.substr(eq + 1), line);
  }
  return root;
}

ExperimentConfig parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return config_from_json(j);
  }
  return config_from_json(parse_toml_subset(text));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vqeq::bench

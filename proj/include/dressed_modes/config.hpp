#pragma once

// Device/qubit configuration files.
//
// Two encodings are accepted:
//   * flat key-value text, one `key = value` per line, `#` starts a comment;
//   * JSON, either flat with dotted keys or nested objects
//     ({"resonator": {"length_m": 0.012}, ...}).
// A file whose first non-blank character is `{` is read as JSON.
//
// Frequencies are given in GHz (ordinary frequency) and stored in rad/s.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dressed_modes/errors.hpp"
#include "dressed_modes/params.hpp"

namespace dressed_modes {

struct RunOptions {
  int levels = 3;            // transmon levels kept for the excited state
  int dirichlet_cutoff = 6;  // lambda_max sits just below this Dirichlet pole
  int fock_cutoff = 10;      // Jaynes-Cummings oracle photon cutoff
  std::uint64_t seed = 20261015;
};

struct Config {
  DeviceParams device = DeviceParams::create(0.012, 1.2e8, 50.0);
  TransmonSpec qubit;
  std::optional<TransmonSpec> second_qubit;
  RunOptions run;
  /// Key-value view of the file after validation, used for run manifests.
  std::map<std::string, std::string> snapshot;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline void flatten_json(const nlohmann::json& j, const std::string& prefix,
                         std::map<std::string, std::string>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten_json(*it, key, out);
    } else if (it->is_string()) {
      out[key] = it->get<std::string>();
    } else if (it->is_number() || it->is_boolean()) {
      out[key] = it->dump();
    } else {
      throw ConfigError("unsupported JSON value for key '" + key + "'");
    }
  }
}

inline std::map<std::string, std::string> parse_key_values(
    const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("duplicate key: " + key);
    }
  }
  return kv;
}

class KeyReader {
 public:
  explicit KeyReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  double number(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing key: " + key);
    used_.insert(key);
    const std::string& s = it->second;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("key " + key + ": not a number: '" + s + "'");
    }
    return value;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::string text(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing key: " + key);
    used_.insert(key);
    std::string s = it->second;
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
      s = s.substr(1, s.size() - 2);
    }
    return s;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : kv_) {
      if (used_.count(key) == 0) throw ConfigError("unknown key: " + key);
    }
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

inline double positive(double x, const std::string& what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ConfigError(what + " must be positive");
  }
  return x;
}

inline TransmonSpec read_qubit(KeyReader& r, const std::string& prefix) {
  TransmonSpec q;
  q.omega_q = ghz_to_rad(positive(r.number(prefix + ".frequency_ghz"),
                                  prefix + ".frequency_ghz"));
  const double alpha_ghz = r.number(prefix + ".anharmonicity_ghz");
  if (!(alpha_ghz < 0.0)) throw ConfigError("anharmonicity must be negative");
  q.anharmonicity = ghz_to_rad(alpha_ghz);

  const bool has_g = r.has(prefix + ".coupling_ghz");
  const bool has_q = r.has(prefix + ".charge_element_C");
  if (has_g == has_q) {
    throw ConfigError("exactly one of " + prefix + ".coupling_ghz and " +
                      prefix + ".charge_element_C must be given");
  }
  if (has_g) {
    q.coupling = ghz_to_rad(
        positive(r.number(prefix + ".coupling_ghz"), prefix + ".coupling_ghz"));
  } else {
    q.charge_element = positive(r.number(prefix + ".charge_element_C"),
                                prefix + ".charge_element_C");
  }
  if (r.has(prefix + ".state")) {
    try {
      q.state = parse_qubit_state(r.text(prefix + ".state"));
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto cj = r.optional_number(prefix + ".cj_f")) {
    q.junction_capacitance = positive(*cj, prefix + ".cj_f");
  }
  if (auto lj = r.optional_number(prefix + ".lj_h")) {
    q.junction_inductance = positive(*lj, prefix + ".lj_h");
  }
  return q;
}

}  // namespace detail

/// Parses configuration text. Throws ConfigError on any validation failure.
inline Config parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  const std::string trimmed = detail::trim(text);
  if (!trimmed.empty() && trimmed.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(trimmed);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    detail::flatten_json(j, "", kv);
  } else {
    kv = detail::parse_key_values(text);
  }

  detail::KeyReader r(kv);
  Config cfg;
  const double length = detail::positive(r.number("resonator.length_m"),
                                         "resonator.length_m");
  const double velocity = detail::positive(
      r.number("resonator.phase_velocity_m_s"), "resonator.phase_velocity_m_s");
  const double impedance = detail::positive(r.number("resonator.impedance_ohm"),
                                            "resonator.impedance_ohm");
  cfg.device = DeviceParams::create(length, velocity, impedance);
  cfg.qubit = detail::read_qubit(r, "qubit");

  const bool any_second = std::any_of(kv.begin(), kv.end(), [](const auto& p) {
    return p.first.rfind("qubit2.", 0) == 0;
  });
  if (any_second) cfg.second_qubit = detail::read_qubit(r, "qubit2");

  if (auto v = r.optional_number("run.levels")) {
    if (*v != 2.0 && *v != 3.0) throw ConfigError("run.levels must be 2 or 3");
    cfg.run.levels = static_cast<int>(*v);
  }
  if (auto v = r.optional_number("run.dirichlet_cutoff")) {
    if (*v < 1.0 || *v != std::floor(*v)) {
      throw ConfigError("run.dirichlet_cutoff must be a positive integer");
    }
    cfg.run.dirichlet_cutoff = static_cast<int>(*v);
  }
  if (auto v = r.optional_number("run.fock_cutoff")) {
    if (*v < 2.0 || *v != std::floor(*v)) {
      throw ConfigError("run.fock_cutoff must be an integer >= 2");
    }
    cfg.run.fock_cutoff = static_cast<int>(*v);
  }
  if (auto v = r.optional_number("run.seed")) {
    if (*v < 0.0 || *v != std::floor(*v)) {
      throw ConfigError("run.seed must be a non-negative integer");
    }
    cfg.run.seed = static_cast<std::uint64_t>(*v);
  }
  r.reject_unknown();

  cfg.snapshot = kv;
  try {
    cfg.qubit.validate();
    if (cfg.second_qubit) cfg.second_qubit->validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace dressed_modes

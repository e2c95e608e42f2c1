#pragma once

// Run configuration: a JSON document with a fixed top-level schema and
// per-model parameter objects. Every object is read through Fields, which
// rejects keys that were never consumed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "discord/discord.hpp"

namespace probe {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Bad or unreadable configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Fields {
 public:
  Fields(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key, double fallback) {
    return take(key) ? as_number(key) : fallback;
  }
  double number(const std::string& key) {
    require(key);
    return as_number(key);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return take(key) ? as_integer(key) : fallback;
  }
  std::int64_t integer(const std::string& key) {
    require(key);
    return as_integer(key);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!take(key)) return fallback;
    const auto& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    const auto& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key) {
    require(key);
    return text(key, "");
  }

  /// The raw node, or nullptr when absent.
  const json* node(const std::string& key) {
    return take(key) ? &node_.at(key) : nullptr;
  }

  [[nodiscard]] std::string where(const std::string& key) const { return path_ + "." + key; }

  /// Throws on the first key that no accessor asked for.
  void finish() const {
    for (const auto& item : node_.items()) {
      if (used_.count(item.key()) == 0) throw ConfigError(path_ + ": unknown field '" + item.key() + "'");
    }
  }

 private:
  bool take(const std::string& key) {
    used_.insert(key);
    return node_.contains(key);
  }
  void require(const std::string& key) {
    if (!take(key)) throw ConfigError(where(key) + ": required field is missing");
  }
  double as_number(const std::string& key) const {
    const auto& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": must be finite");
    return x;
  }
  std::int64_t as_integer(const std::string& key) const {
    const auto& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

struct RunConfig {
  std::string model;
  std::uint64_t seed = 0;
  json params = json::object();
  json time_grid;  // null when absent
  discord::BasisGrid bases;
  std::string output_dir;  // empty when absent
};

inline const std::vector<std::string>& known_models() {
  static const std::vector<std::string> models{"ion",      "photon-cv", "photon-dv", "spinchain",
                                               "emission", "haar",      "generic"};
  return models;
}

inline RunConfig parse_config(const json& doc) {
  Fields top(doc, "config");
  RunConfig cfg;
  cfg.model = top.text("model");
  bool known = false;
  for (const auto& m : known_models()) known = known || m == cfg.model;
  if (!known) throw ConfigError("config.model: unknown model '" + cfg.model + "'");
  const auto seed = top.integer("seed", 0);
  if (seed < 0) throw ConfigError("config.seed: must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  if (const json* p = top.node("params")) {
    if (!p->is_object()) throw ConfigError("config.params: expected an object");
    cfg.params = *p;
  }
  if (const json* g = top.node("time_grid")) cfg.time_grid = *g;
  if (const json* b = top.node("basis_grid")) {
    Fields f(*b, "config.basis_grid");
    cfg.bases.n_theta = static_cast<int>(f.integer("n_theta", cfg.bases.n_theta));
    cfg.bases.n_phi = static_cast<int>(f.integer("n_phi", cfg.bases.n_phi));
    f.finish();
    if (cfg.bases.n_theta < 2 || cfg.bases.n_phi < 2) {
      throw ConfigError("config.basis_grid: n_theta and n_phi must be at least 2");
    }
  }
  if (const json* o = top.node("output")) {
    Fields f(*o, "config.output");
    cfg.output_dir = f.text("dir", "");
    f.finish();
  }
  top.finish();
  return cfg;
}

/// The time grid from the config, or `fallback` when none is given.
/// Accepts {"t_max": x, "points": n} or {"samples": [0, ...]}.
inline discord::TimeGrid time_grid_or(const json& spec, const discord::TimeGrid& fallback) {
  if (spec.is_null()) return fallback;
  Fields f(spec, "config.time_grid");
  try {
    if (f.has("samples")) {
      const json* s = f.node("samples");
      if (!s->is_array()) throw ConfigError("config.time_grid.samples: expected an array");
      std::vector<double> samples;
      for (const auto& v : *s) {
        if (!v.is_number()) throw ConfigError("config.time_grid.samples: expected numbers");
        samples.push_back(v.get<double>());
      }
      f.finish();
      return discord::TimeGrid(std::move(samples));
    }
    const double t_max = f.number("t_max");
    const auto points = f.integer("points");
    f.finish();
    if (points < 2) throw ConfigError("config.time_grid.points: need at least 2");
    return discord::TimeGrid::uniform(t_max, static_cast<std::size_t>(points));
  } catch (const discord::ContractError& e) {
    throw ConfigError(std::string("config.time_grid: ") + e.what());
  }
}

inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace probe

#pragma once

// discord-probe command line: `run <config>` and
// `sweep <config> --axis <name> --values <list>`.
// Exit status: 0 success, 2 configuration error, 3 soundness violation,
// 1 anything else (I/O failure, internal error).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "output.hpp"
#include "runners.hpp"

namespace probe {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitContract = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 1;
};

inline std::string resolve_out_dir(const Overrides& o, const RunConfig& cfg) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return "discord-out";
}

inline Parallelism parallelism(const Overrides& o) {
  if (o.threads > 0) return {o.threads};
  return {static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
}

inline json apply_seed(json doc, const Overrides& o) {
  if (o.seed) doc["seed"] = *o.seed;
  return doc;
}

inline void report_violations(const RunResult& r, std::ostream& err) {
  for (const auto& v : r.violations) err << "soundness violation: " << v << "\n";
}

inline int execute_run(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  const json doc = apply_seed(load_config_file(path), o);
  const RunConfig cfg = parse_config(doc);
  const RunResult r = run_model(cfg, parallelism(o));
  write_record(resolve_out_dir(o, cfg), canonical_config(doc, cfg.seed), cfg.model, r);
  out << r.verdict << "\n";
  if (!r.sound()) {
    report_violations(r, err);
    return kExitContract;
  }
  return kExitOk;
}

namespace detail {

inline double parse_real(const std::string& text) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(x)) {
    throw ConfigError("--values: '" + text + "' is not a number");
  }
  return x;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

/// "0.1,0.2,0.5", or "lin:a:b:n" / "log:a:b:n" for n evenly or geometrically
/// spaced values from a to b.
inline std::vector<double> parse_values(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() == 4 && (parts[0] == "lin" || parts[0] == "log")) {
    const double a = detail::parse_real(parts[1]);
    const double b = detail::parse_real(parts[2]);
    const double n_real = detail::parse_real(parts[3]);
    if (n_real < 2 || n_real != std::floor(n_real)) throw ConfigError("--values: count must be an integer >= 2");
    const auto n = static_cast<std::size_t>(n_real);
    if (parts[0] == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError("--values: log range needs positive ends");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n - 1);
      v[i] = parts[0] == "lin" ? a + (b - a) * s : a * std::pow(b / a, s);
    }
    v.back() = b;
    return v;
  }
  std::vector<double> v;
  for (const auto& item : detail::split(text, ',')) v.push_back(detail::parse_real(item));
  return v;
}

inline ParamKind sweep_axis_kind(const std::string& model, const std::string& axis) {
  for (const auto& spec : param_specs(model)) {
    if (axis == spec.name && (spec.kind == ParamKind::Real || spec.kind == ParamKind::Integer)) return spec.kind;
  }
  throw ConfigError("--axis: '" + axis + "' is not a numeric parameter of model '" + model + "'");
}

inline std::string record_dir_name(const std::string& axis, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", index);
  return axis + buf;
}

inline int execute_sweep(const std::string& path, const std::string& axis, const std::string& values_text,
                         const Overrides& o, std::ostream& out, std::ostream& err) {
  const json doc = apply_seed(load_config_file(path), o);
  const RunConfig base = parse_config(doc);
  const ParamKind kind = sweep_axis_kind(base.model, axis);
  const auto values = parse_values(values_text);
  const std::filesystem::path dir = resolve_out_dir(o, base);

  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, double>>> rows;
  std::vector<bool> row_sound;
  ordered_json records = ordered_json::array();
  bool all_sound = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json point = doc;
    if (!point.contains("params")) point["params"] = json::object();
    if (kind == ParamKind::Integer) {
      if (values[i] != std::floor(values[i])) throw ConfigError("--values: axis '" + axis + "' takes integers");
      point["params"][axis] = static_cast<std::int64_t>(values[i]);
    } else {
      point["params"][axis] = values[i];
    }
    const RunConfig cfg = parse_config(point);
    const RunResult r = run_model(cfg, parallelism(o));
    const std::string name = record_dir_name(axis, i);
    const json canonical = canonical_config(point, cfg.seed);
    write_record(dir / name, canonical, cfg.model, r);
    records.push_back({{"value", values[i]}, {"dir", name}, {"config_hash", config_hash(canonical)},
                       {"sound", r.sound()}});
    for (const auto& [k, v] : r.scalars) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
    rows.push_back(r.scalars);
    row_sound.push_back(r.sound());
    out << axis << " = " << format_number(values[i]) << ": " << r.verdict << "\n";
    if (!r.sound()) {
      report_violations(r, err);
      all_sound = false;
    }
  }

  std::string csv = axis;
  for (const auto& c : columns) csv += "," + c;
  csv += ",sound\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += format_number(values[i]);
    for (const auto& c : columns) {
      csv += ',';
      for (const auto& [k, v] : rows[i]) {
        if (k == c) {
          csv += format_number(v);
          break;
        }
      }
    }
    csv += row_sound[i] ? ",1\n" : ",0\n";
  }
  write_atomic(dir / "sweep.csv", csv);
  ordered_json index;
  index["schema"] = "discord-probe/sweep/1";
  index["version"] = kVersion;
  index["model"] = base.model;
  index["axis"] = axis;
  index["config_hash"] = config_hash(canonical_config(doc, base.seed));
  index["records"] = records;
  write_atomic(dir / "sweep.json", index.dump(2) + "\n");
  return all_sound ? kExitOk : kExitContract;
}

/// Runs `body`, mapping exceptions to exit codes.
template <class Body>
int guarded(Body&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "unsupported configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Local detection of quantum discord: run models and parameter sweeps", "discord-probe"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out-dir", o.out_dir, "output directory (overrides the config)");
  app.add_option("--threads", o.threads, "worker threads; 0 uses every core")->check(CLI::NonNegativeNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run one configuration");
  run->add_option("config", config_path, "config file (JSON)")->required();
  run->fallthrough();

  std::string axis;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "run a configuration over a list of parameter values");
  sweep->add_option("config", config_path, "config file (JSON)")->required();
  sweep->add_option("--axis", axis, "parameter name inside params")->required();
  sweep->add_option("--values", values, "comma list, lin:a:b:n or log:a:b:n")->required();
  sweep->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) o.seed = seed;

  return guarded(
      [&] {
        if (*run) return execute_run(config_path, o, out, err);
        return execute_sweep(config_path, axis, values, o, out, err);
      },
      err);
}

}  // namespace probe

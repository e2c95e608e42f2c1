#pragma once

// One runner per model. Each reads its "params" object, runs the protocol
// and returns scalars, time-series tables, a verdict and any soundness
// violations.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace probe {

using discord::Parallelism;

/// d_max above this counts as a witness.
inline constexpr double kWitnessThreshold = discord::kSoundnessTol;

enum class ParamKind { Real, Integer, Boolean, Other };

struct ParamSpec {
  const char* name;
  ParamKind kind;
};

/// Parameters accepted in "params" for each model. Real and Integer entries
/// are valid sweep axes.
inline const std::vector<ParamSpec>& param_specs(const std::string& model) {
  using K = ParamKind;
  static const std::vector<ParamSpec> ion{{"omega", K::Real},   {"eta", K::Real},
                                          {"nbar", K::Real},    {"n_max", K::Integer},
                                          {"lamb_dicke_limit", K::Boolean},
                                          {"t0", K::Real},      {"t1", K::Real}};
  static const std::vector<ParamSpec> photon_cv{{"beta", K::Real},   {"delta_omega", K::Real},
                                                {"omega0", K::Real}, {"t_prep", K::Real},
                                                {"span", K::Real},   {"points", K::Integer},
                                                {"eta_angle", K::Real}};
  static const std::vector<ParamSpec> photon_dv{{"lambda", K::Real}, {"theta", K::Real},
                                                {"perturbation", K::Other}};
  static const std::vector<ParamSpec> spinchain{{"n_spins", K::Integer}, {"alpha", K::Real},
                                                {"j0", K::Real},         {"b_field", K::Real},
                                                {"kT", K::Real}};
  static const std::vector<ParamSpec> emission{
      {"n_modes", K::Integer},   {"half_bandwidth", K::Real}, {"gamma", K::Real},
      {"coupling", K::Real},     {"atomic_gap", K::Real},     {"structured", K::Boolean},
      {"t0", K::Real},           {"scan_points", K::Integer}, {"scan_span", K::Real}};
  static const std::vector<ParamSpec> haar{{"d_a", K::Integer}, {"d_b", K::Integer},
                                           {"samples", K::Integer}, {"rank", K::Integer}};
  static const std::vector<ParamSpec> generic{{"d_a", K::Integer}, {"d_b", K::Integer},
                                              {"state", K::Other},  {"generator", K::Other},
                                              {"dephasing", K::Other}};
  if (model == "ion") return ion;
  if (model == "photon-cv") return photon_cv;
  if (model == "photon-dv") return photon_dv;
  if (model == "spinchain") return spinchain;
  if (model == "emission") return emission;
  if (model == "haar") return haar;
  if (model == "generic") return generic;
  throw ConfigError("unknown model '" + model + "'");
}

namespace detail {

inline std::string witness_verdict(double d_max, double bound, const char* d_name = "d_max",
                                   const char* bound_name = "D") {
  if (d_max > kWitnessThreshold) {
    return std::string("discord witnessed: ") + d_name + " = " + format_short(d_max) + " ≤ " + bound_name +
           " = " + format_short(bound);
  }
  return std::string("no discord witnessed: ") + d_name + " = " + format_short(d_max);
}

// A time given as a number or as the string "quarter_period".
inline double ion_time(const json& v, const std::string& where, double quarter) {
  if (v.is_string() && v.get<std::string>() == "quarter_period") return quarter;
  if (v.is_number()) return v.get<double>();
  throw ConfigError(where + ": expected a number or \"quarter_period\"");
}

inline double max_abs_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev;
}

inline discord::Matrix complex_matrix(const json& node, const std::string& where) {
  Fields f(node, where);
  const json* re = f.node("re");
  const json* im = f.node("im");
  f.finish();
  if (!re || !re->is_array() || re->empty()) throw ConfigError(where + ".re: expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(re->size());
  const auto cols = static_cast<Eigen::Index>((*re)[0].size());
  discord::Matrix m = discord::Matrix::Zero(rows, cols);
  auto fill = [&](const json& part, const std::string& name, bool imaginary) {
    if (!part.is_array() || static_cast<Eigen::Index>(part.size()) != rows) {
      throw ConfigError(where + "." + name + ": wrong number of rows");
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = part[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw ConfigError(where + "." + name + ": rows must have equal length");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& x = row[static_cast<std::size_t>(c)];
        if (!x.is_number()) throw ConfigError(where + "." + name + ": expected numbers");
        m(r, c) += imaginary ? discord::Complex(0.0, x.get<double>()) : discord::Complex(x.get<double>(), 0.0);
      }
    }
  };
  fill(*re, "re", false);
  if (im) fill(*im, "im", true);
  return m;
}

inline discord::Vector complex_vector(const json& node, const std::string& where) {
  Fields f(node, where);
  const json* re = f.node("re");
  const json* im = f.node("im");
  f.finish();
  if (!re || !re->is_array() || re->empty()) throw ConfigError(where + ".re: expected a nonempty array");
  const auto n = static_cast<Eigen::Index>(re->size());
  discord::Vector v = discord::Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& x = (*re)[static_cast<std::size_t>(i)];
    if (!x.is_number()) throw ConfigError(where + ".re: expected numbers");
    v(i) = x.get<double>();
  }
  if (im) {
    if (!im->is_array() || static_cast<Eigen::Index>(im->size()) != n) {
      throw ConfigError(where + ".im: length differs from re");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& x = (*im)[static_cast<std::size_t>(i)];
      if (!x.is_number()) throw ConfigError(where + ".im: expected numbers");
      v(i) += discord::Complex(0.0, x.get<double>());
    }
  }
  return v;
}

}  // namespace detail

inline RunResult run_ion(const RunConfig& cfg, Parallelism par) {
  namespace ion = discord::ion;
  Fields f(cfg.params, "config.params");
  ion::IonParams p;
  p.omega = f.number("omega", p.omega);
  p.eta = f.number("eta", p.eta);
  p.nbar = f.number("nbar", p.nbar);
  p.n_max = f.integer("n_max", p.n_max);
  p.lamb_dicke_limit = f.boolean("lamb_dicke_limit", p.lamb_dicke_limit);
  const json* t0_node = f.node("t0");
  const json* t1_node = f.node("t1");
  f.finish();
  ion::validate(p);
  const double quarter = ion::quarter_period(p);
  const double t0 = t0_node ? detail::ion_time(*t0_node, "config.params.t0", quarter) : quarter;
  if (t0 < 0.0) throw ConfigError("config.params.t0: must be nonnegative");

  const auto grid = time_grid_or(cfg.time_grid, discord::TimeGrid::uniform(4.0 * quarter, 201));
  const auto evo = ion::evolution(p);
  const auto series = ion::simulate_detection(p, evo, t0, grid, par);
  std::vector<double> analytic(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) analytic[i] = ion::analytic_local_distance(p, t0, grid[i]);

  RunResult r;
  r.add("t0", t0);
  r.add("n_max", static_cast<double>(ion::cutoff(p)));
  r.add("d_max", series.d_max);
  r.add("argmax_time", series.argmax_time);
  r.add("D", *series.bound_ref);
  r.add("D_analytic", ion::analytic_disturbance(p, t0));
  r.add("max_abs_dev_analytic", detail::max_abs_deviation(series.d_t, analytic));
  check_sound(r, series, "ion series");
  if (t1_node) {
    const double t1 = detail::ion_time(*t1_node, "config.params.t1", quarter);
    if (t1 < 0.0) throw ConfigError("config.params.t1: must be nonnegative");
    const auto point = ion::simulate_detection(
        p, evo, t0, t1 > 0.0 ? discord::TimeGrid({0.0, t1}) : discord::TimeGrid({0.0}), par);
    check_sound(r, point, "ion point");
    r.add("t1", t1);
    r.add("d_t1", point.d_t.back());
    r.add("d_t1_analytic", ion::analytic_local_distance(p, t0, t1));
  }
  r.tables.push_back(series_table("series", series, "d_t"));
  r.verdict = detail::witness_verdict(series.d_max, *series.bound_ref);
  return r;
}

inline RunResult run_photon_cv(const RunConfig& cfg, Parallelism par) {
  namespace photon = discord::photon;
  Fields f(cfg.params, "config.params");
  photon::PhotonParams p;
  p.beta = f.number("beta", p.beta);
  p.delta_omega = f.number("delta_omega", p.delta_omega);
  p.omega0 = f.number("omega0", p.omega0);
  p.t_prep = f.number("t_prep", p.t_prep);
  p.span = f.number("span", p.span);
  p.points = f.integer("points", p.points);
  const double eta_angle = f.number("eta_angle", 0.0);
  f.finish();
  photon::validate(p);

  const double horizon = 3.0 * std::max(p.t_prep, 1.0 / p.delta_omega);
  const auto grid = time_grid_or(cfg.time_grid, discord::TimeGrid::uniform(horizon, 601));
  const auto state = photon::build_correlated_state(p);
  const auto evo = photon::michelson_propagator(p, eta_angle);
  const auto eigen = discord::local_eigenbasis(state);
  // beta = 0 leaves rho_A maximally mixed; any basis then gives the same (zero) signal.
  const auto basis = eigen.degenerate ? discord::ProjectiveBasis::computational(2) : eigen.basis;
  const auto series = discord::run_local_detection(state, basis, evo, grid, par);
  std::vector<double> analytic(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) analytic[i] = photon::analytic_local_distance(p, grid[i]);

  RunResult r;
  r.add("d_max", series.d_max);
  r.add("argmax_time", series.argmax_time);
  r.add("d_peak_analytic", photon::analytic_peak_distance(p));
  r.add("max_abs_dev_closed_form", detail::max_abs_deviation(series.d_t, analytic));
  r.add("D_discrete", *series.bound_ref);
  r.add("D_continuum", photon::analytic_disturbance(p));
  r.details["marginal_degenerate"] = eigen.degenerate;
  check_sound(r, series, "photon-cv series");
  r.tables.push_back(series_table("series", series, "d_t"));
  r.verdict = detail::witness_verdict(series.d_max, *series.bound_ref);
  return r;
}

inline RunResult run_photon_dv(const RunConfig& cfg, Parallelism par) {
  namespace photon = discord::photon;
  Fields f(cfg.params, "config.params");
  photon::DiscreteAncillaParams p;
  p.lambda = f.number("lambda", p.lambda);
  p.theta = f.number("theta", p.theta);
  discord::Matrix perturbation = photon::discrete_perturbation();
  std::string perturbation_name = "half_wave_plate";
  double perturbation_angle = std::numbers::pi / 8.0;
  if (const json* node = f.node("perturbation")) {
    Fields g(*node, "config.params.perturbation");
    perturbation_name = g.text("type");
    if (perturbation_name == "half_wave_plate") {
      perturbation_angle = g.number("angle", perturbation_angle);
      perturbation = photon::half_wave_plate(perturbation_angle);
    } else if (perturbation_name == "sigma_x") {
      perturbation = discord::pauli::x();
    } else {
      throw ConfigError("config.params.perturbation.type: expected half_wave_plate or sigma_x");
    }
    g.finish();
  }
  f.finish();

  const auto grid = time_grid_or(cfg.time_grid, discord::TimeGrid::uniform(2.0 * std::numbers::pi, 200));
  const auto state = photon::build_discrete_state(p);
  const auto evo = discord::EvolutionSpec::generator(photon::discrete_phase_generator());
  const auto minimal = discord::minimal_dephasing_disturbance(state, cfg.bases);
  const auto series = discord::run_minimized_detection(state, evo, grid, cfg.bases, minimal, par);
  const auto correlation = discord::classical_correlation_witness(state, perturbation, evo, grid, par);

  RunResult r;
  r.add("D_min", minimal.value);
  r.add("d_min_max", series.d_max);
  r.add("d_min_argmax_time", series.argmax_time);
  r.add("argmin_theta", minimal.point.theta);
  r.add("argmin_phi", minimal.point.phi);
  r.add("correlation_d0", correlation.series.d_t.front());
  r.add("correlation_d_max", correlation.series.d_max);
  r.add("correlation_bound", *correlation.series.bound_ref);
  r.add("correlation_detected", correlation.detected ? 1.0 : 0.0);
  r.details["perturbation"] = perturbation_name;
  if (perturbation_name == "half_wave_plate") r.details["perturbation_angle"] = perturbation_angle;
  check_sound(r, series, "photon-dv minimized series");
  check_sound(r, correlation.series, "photon-dv correlation series");
  r.tables.push_back(series_table("minimized", series, "d_min_t"));
  r.tables.push_back(series_table("correlation", correlation.series, "d_t"));
  r.verdict = detail::witness_verdict(series.d_max, minimal.value, "d_min_max", "D_min");
  if (series.d_max <= kWitnessThreshold) {
    r.verdict += correlation.detected ? "; classical correlations witnessed" : "; no correlations witnessed";
  }
  return r;
}

inline RunResult run_spinchain(const RunConfig& cfg, Parallelism par) {
  namespace sc = discord::spinchain;
  Fields f(cfg.params, "config.params");
  sc::ChainParams p;
  p.n_spins = static_cast<int>(f.integer("n_spins", p.n_spins));
  p.alpha = f.number("alpha", p.alpha);
  p.j0 = f.number("j0", p.j0);
  p.b_field = f.number("b_field", p.b_field);
  p.kT = f.number("kT", p.kT);
  f.finish();
  sc::validate(p);

  const auto grid = time_grid_or(cfg.time_grid, sc::default_time_grid(p));
  const auto spectrum = sc::diagonalize(p);
  const auto ground = sc::ground_state_detection(p, spectrum, grid, par);
  double odd = 0.0;
  for (const auto& e : sc::excitation_overlaps(p, spectrum)) {
    if (e.parity != ground.ground.parity) odd = std::max(odd, e.population);
  }

  RunResult r;
  r.add("gap", ground.ground.gap);
  r.add("near_degenerate", ground.ground.near_degenerate ? 1.0 : 0.0);
  r.add("negativity", ground.negativity);
  r.add("disturbance", ground.disturbance);
  r.add("d_max", ground.series.d_max);
  r.add("argmax_time", ground.series.argmax_time);
  r.add("max_form_deviation", detail::max_abs_deviation(ground.series.d_t, ground.magnetization_d_t));
  r.add("max_other_parity_population", odd);
  check_sound(r, ground.series, "spinchain ground series");
  r.tables.push_back(series_table("ground", ground.series, "d_t"));
  r.verdict = detail::witness_verdict(ground.series.d_max, ground.negativity);
  if (p.kT > 0.0) {
    const auto thermal = sc::thermal_detection(p, spectrum, grid, cfg.bases, par);
    r.add("D_min", thermal.d_min_bound);
    r.add("d_min", thermal.d_min_series.d_max);
    r.add("d_min_argmax_time", thermal.d_min_series.argmax_time);
    r.add("argmin_theta", thermal.argmin_basis.theta);
    r.add("argmin_phi", thermal.argmin_basis.phi);
    check_sound(r, thermal.d_min_series, "spinchain thermal series");
    r.tables.push_back(series_table("thermal", thermal.d_min_series, "d_min_t"));
    r.verdict = detail::witness_verdict(thermal.d_min_series.d_max, thermal.d_min_bound, "d_min", "D_min");
  }
  return r;
}

inline RunResult run_emission(const RunConfig& cfg, Parallelism par) {
  namespace em = discord::emission;
  Fields f(cfg.params, "config.params");
  em::EmissionParams p;
  p.n_modes = f.integer("n_modes", p.n_modes);
  p.half_bandwidth = f.number("half_bandwidth", p.half_bandwidth);
  if (f.has("gamma") && f.has("coupling")) {
    throw ConfigError("config.params: give either gamma or coupling, not both");
  }
  const bool by_coupling = f.has("coupling");
  const double gamma_in = f.number("gamma", 1.0);
  const double coupling_in = f.number("coupling", 0.0);
  const double atomic_gap = f.number("atomic_gap", p.atomic_gap);
  const bool structured = f.boolean("structured", false);
  const json* t0_node = f.node("t0");
  const auto scan_points = f.integer("scan_points", 20);
  const double scan_span_in = f.number("scan_span", 0.0);
  f.finish();
  if (p.n_modes < 2) throw ConfigError("config.params.n_modes: need at least 2");
  if (!(p.half_bandwidth > 0.0)) throw ConfigError("config.params.half_bandwidth: must be positive");
  if (by_coupling) {
    p.coupling = coupling_in;
  } else {
    if (!(gamma_in > 0.0)) throw ConfigError("config.params.gamma: must be positive");
    p = em::EmissionParams::with_decay_rate(gamma_in, p.half_bandwidth, p.n_modes);
  }
  p.atomic_gap = atomic_gap;
  p.structured = structured;
  em::validate(p);
  const double gamma = p.decay_rate();
  if (!(gamma > 0.0)) throw ConfigError("config.params.coupling: must be positive");
  if (scan_points < 2) throw ConfigError("config.params.scan_points: need at least 2");
  double t0 = 1.0 / gamma;
  if (t0_node) {
    if (!t0_node->is_number()) throw ConfigError("config.params.t0: expected a number");
    t0 = t0_node->get<double>();
    if (t0 < 0.0) throw ConfigError("config.params.t0: must be nonnegative");
  }
  const double scan_span = scan_span_in > 0.0 ? scan_span_in : 3.0 / gamma;

  const em::Sector sector(p);
  // Series over the delay tau = t1 - t0 at fixed t0.
  const auto grid = time_grid_or(cfg.time_grid, discord::TimeGrid::uniform(3.0 / gamma, 201));
  std::vector<double> d_t(grid.size());
  discord::parallel_for(grid.size(), par, [&](std::size_t i) { d_t[i] = sector.local_signal(t0, t0 + grid[i]); });
  const double n_t0 = sector.negativity(t0);
  const auto series = discord::detail::make_series(grid, std::move(d_t), n_t0);

  // t1 = t0 + tau over a square (t0, tau) scan.
  const auto n = static_cast<std::size_t>(scan_points);
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = scan_span * static_cast<double>(i) / static_cast<double>(n - 1);
  std::vector<double> scan_signal(n * n);
  std::vector<double> scan_neg(n);
  discord::parallel_for(n, par, [&](std::size_t i) {
    scan_neg[i] = sector.negativity(axis[i]);
    for (std::size_t j = 0; j < n; ++j) scan_signal[i * n + j] = sector.local_signal(axis[i], axis[i] + axis[j]);
  });
  double scan_max = 0.0;
  double scan_t0 = 0.0;
  double scan_t1 = 0.0;
  bool scan_sound = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = scan_signal[i * n + j];
      if (s > scan_neg[i] + discord::kSoundnessTol) scan_sound = false;
      if (s > scan_max) {
        scan_max = s;
        scan_t0 = axis[i];
        scan_t1 = axis[i] + axis[j];
      }
    }
  }
  const double peak_negativity = *std::max_element(scan_neg.begin(), scan_neg.end());
  std::vector<double> fit_times;
  for (int k = 0; k <= 18; ++k) fit_times.push_back((0.2 + 0.1 * k) / gamma);
  const auto fit = em::fit_negativity_law(sector, fit_times);

  RunResult r;
  r.add("decay_rate", gamma);
  r.add("coupling", p.coupling);
  r.add("regime_valid", p.regime_valid() ? 1.0 : 0.0);
  r.add("t0", t0);
  r.add("negativity_t0", n_t0);
  r.add("d_max", series.d_max);
  r.add("argmax_time", series.argmax_time);
  r.add("scan_max_signal", scan_max);
  r.add("scan_argmax_t0", scan_t0);
  r.add("scan_argmax_t1", scan_t1);
  r.add("scan_peak_negativity", peak_negativity);
  r.add("scan_signal_ratio", peak_negativity > 0.0 ? scan_max / peak_negativity : 0.0);
  r.add("law_c", fit.c);
  r.add("law_max_relative_dev", fit.max_relative_dev);
  r.add("law_peak", fit.peak);
  check_sound(r, series, "emission series");
  if (!scan_sound) r.violations.emplace_back("emission scan: signal exceeds negativity at some (t0, t1)");
  r.tables.push_back(series_table("series", series, "d_t"));
  r.verdict = detail::witness_verdict(series.d_max, n_t0, "d_max", "N");
  return r;
}

/// Random full-rank (or rank-limited) mixed state: G G^dagger / Tr with a
/// complex Ginibre G.
inline discord::BipartiteState random_mixed_state(discord::BipartitionDims dims, Eigen::Index rank,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  discord::Matrix g(dims.total(), rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    for (Eigen::Index r = 0; r < dims.total(); ++r) g(r, c) = discord::Complex(normal(rng), normal(rng));
  }
  discord::Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return discord::BipartiteState(std::move(rho), dims);
}

inline RunResult run_haar(const RunConfig& cfg, Parallelism par) {
  Fields f(cfg.params, "config.params");
  const auto d_a = f.integer("d_a", 2);
  const auto d_b = f.integer("d_b", 2);
  const auto samples = f.integer("samples", 10000);
  const auto rank = f.integer("rank", d_a * d_b);
  f.finish();
  if (d_a < 2 || d_b < 1 || d_a * d_b > 64) throw ConfigError("config.params: need d_a >= 2, d_b >= 1, d_a d_b <= 64");
  if (rank < 1 || rank > d_a * d_b) throw ConfigError("config.params.rank: must lie in [1, d_a d_b]");
  if (samples < 100) throw ConfigError("config.params.samples: need at least 100");
  const discord::BipartitionDims dims{d_a, d_b};
  const auto state = random_mixed_state(dims, rank, discord::detail::splitmix64(cfg.seed));
  const auto est = discord::haar_average_estimate(state, static_cast<std::size_t>(samples), cfg.seed, par);
  const double coefficient = discord::haar_coefficient(dims);
  const double z = est.std_error > 0.0 ? (est.mean - est.predicted) / est.std_error : 0.0;

  RunResult r;
  r.add("coefficient", coefficient);
  r.add("hs_distance_sq", est.predicted / coefficient);
  r.add("predicted", est.predicted);
  r.add("mean", est.mean);
  r.add("std_error", est.std_error);
  r.add("z_score", z);
  r.add("disturbance", discord::dephasing_disturbance(state));
  r.verdict = "haar average: mean = " + format_short(est.mean) + ", predicted = " + format_short(est.predicted) +
              " (z = " + format_short(z) + ")";
  return r;
}

inline RunResult run_generic(const RunConfig& cfg, Parallelism par) {
  Fields f(cfg.params, "config.params");
  const auto d_a = f.integer("d_a");
  const auto d_b = f.integer("d_b");
  if (d_a < 2 || d_b < 1) throw ConfigError("config.params: need d_a >= 2 and d_b >= 1");
  const discord::BipartitionDims dims{d_a, d_b};
  const json* state_node = f.node("state");
  const json* generator_node = f.node("generator");
  const std::string mode_in = f.text("dephasing", "auto");
  f.finish();
  if (!state_node) throw ConfigError("config.params.state: required field is missing");
  if (!generator_node) throw ConfigError("config.params.generator: required field is missing");

  Fields s(*state_node, "config.params.state");
  const json* pure = s.node("pure");
  const json* density = s.node("density");
  s.finish();
  if ((pure == nullptr) == (density == nullptr)) {
    throw ConfigError("config.params.state: give exactly one of pure or density");
  }
  const auto state = pure ? discord::BipartiteState::pure(detail::complex_vector(*pure, "config.params.state.pure"), dims)
                          : discord::BipartiteState(detail::complex_matrix(*density, "config.params.state.density"), dims);
  const discord::Matrix h = detail::complex_matrix(*generator_node, "config.params.generator");
  discord::require_hermitian(h, "config.params.generator");
  const auto evo = discord::EvolutionSpec::generator(h);
  const auto grid = time_grid_or(cfg.time_grid, discord::TimeGrid::uniform(10.0, 201));

  std::string mode = mode_in;
  if (mode != "auto" && mode != "eigenbasis" && mode != "minimized") {
    throw ConfigError("config.params.dephasing: expected auto, eigenbasis or minimized");
  }
  if (mode == "auto") mode = discord::local_eigenbasis(state).degenerate && d_a == 2 ? "minimized" : "eigenbasis";

  RunResult r;
  discord::WitnessSeries series;
  if (mode == "minimized") {
    series = discord::run_minimized_detection(state, evo, grid, cfg.bases, par);
    r.tables.push_back(series_table("series", series, "d_min_t"));
  } else {
    series = discord::run_local_detection(state, evo, grid, par);
    r.tables.push_back(series_table("series", series, "d_t"));
  }
  r.details["dephasing"] = mode;
  r.add("d_max", series.d_max);
  r.add("argmax_time", series.argmax_time);
  r.add(mode == "minimized" ? "D_min" : "D", *series.bound_ref);
  r.add("negativity", discord::negativity(state));
  check_sound(r, series, "generic series");
  r.verdict = detail::witness_verdict(series.d_max, *series.bound_ref);
  return r;
}

inline RunResult run_model(const RunConfig& cfg, Parallelism par) {
  if (cfg.model == "ion") return run_ion(cfg, par);
  if (cfg.model == "photon-cv") return run_photon_cv(cfg, par);
  if (cfg.model == "photon-dv") return run_photon_dv(cfg, par);
  if (cfg.model == "spinchain") return run_spinchain(cfg, par);
  if (cfg.model == "emission") return run_emission(cfg, par);
  if (cfg.model == "haar") return run_haar(cfg, par);
  if (cfg.model == "generic") return run_generic(cfg, par);
  throw ConfigError("unknown model '" + cfg.model + "'");
}

}  // namespace probe

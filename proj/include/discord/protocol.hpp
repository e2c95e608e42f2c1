#pragma once

// Local detection of discord: dephase the probe at t = 0, let A and B interact,
// and compare the two probe marginals at later times.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "discord/evolution.hpp"
#include "discord/measures.hpp"
#include "discord/parallel.hpp"

namespace discord {

inline constexpr double kSoundnessTol = 1e-9;

struct WitnessSeries {
  std::vector<double> times;
  std::vector<double> d_t;
  double d_max = 0.0;
  double argmax_time = 0.0;
  std::optional<double> bound_ref;

  /// d_t <= bound_ref + 1e-9 everywhere (vacuous without a bound).
  [[nodiscard]] bool sound() const {
    if (!bound_ref) return true;
    for (double d : d_t) {
      if (d > *bound_ref + kSoundnessTol) return false;
    }
    return true;
  }
};

namespace detail {

inline WitnessSeries make_series(const TimeGrid& grid, std::vector<double> d_t,
                                 std::optional<double> bound) {
  WitnessSeries s;
  s.times = grid.samples();
  s.d_t = std::move(d_t);
  s.bound_ref = bound;
  for (std::size_t i = 0; i < s.d_t.size(); ++i) {
    if (i == 0 || s.d_t[i] > s.d_max) {
      s.d_max = s.d_t[i];
      s.argmax_time = s.times[i];
    }
  }
  return s;
}

// (1/2) ||Tr_B U(t) X U(t)^dagger||_1 over the grid.
inline std::vector<double> reduced_distance_series(const EvolutionSpec& evo, const Matrix& x,
                                                   const BipartitionDims& dims, const TimeGrid& grid,
                                                   Parallelism par) {
  const ReducedDynamics reduced(evo, x, dims);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), par, [&](std::size_t i) { out[i] = 0.5 * trace_norm(reduced.at(grid[i])); });
  return out;
}

inline void require_compatible(const BipartiteState& state, const EvolutionSpec& evo) {
  if (evo.dim() != state.dims().total()) {
    throw DimensionError("detection: evolution and state dimensions differ");
  }
}

}  // namespace detail

/// Dephases A in `basis` and records
/// d(t) = || Tr_B U rho U^dagger - Tr_B U rho' U^dagger || on the grid, with
/// bound ||rho - rho'||. For models where the dephasing basis is known.
inline WitnessSeries run_local_detection(const BipartiteState& state, const ProjectiveBasis& basis,
                                         const EvolutionSpec& evo, const TimeGrid& grid,
                                         Parallelism par = {}) {
  detail::require_compatible(state, evo);
  const BipartiteState dephased = dephase(state, basis);
  // Partial trace and evolution are linear, so the difference is evolved once.
  const Matrix difference = state.rho() - dephased.rho();
  auto d_t = detail::reduced_distance_series(evo, difference, state.dims(), grid, par);
  return detail::make_series(grid, std::move(d_t), trace_distance(state, dephased));
}

/// As above with the eigenbasis of rho_A, so that the bound is the dephasing
/// disturbance.
inline WitnessSeries run_local_detection(const BipartiteState& state, const EvolutionSpec& evo,
                                         const TimeGrid& grid, Parallelism par = {}) {
  const auto eigen = local_eigenbasis(state);
  if (eigen.degenerate) {
    throw DegenerateMarginalError(
        "run_local_detection: rho_A is degenerate; use run_minimized_detection");
  }
  return run_local_detection(state, eigen.basis, evo, grid, par);
}

/// d_min(t) = min over qubit bases Pi of d_Pi(t), with bound D_min.
///
/// For Bloch direction n, rho - Phi_Pi(rho) = (rho - sum_ab n_a n_b S_ab) / 2
/// with S_ab = (sigma_a (x) I) rho (sigma_b (x) I). The reduced dynamics of rho
/// and of the six Hermitian combinations S_aa, S_ab + S_ba are computed once;
/// each basis then costs a 2x2 combination per time.
/// `minimal` must be minimal_dephasing_disturbance(state, bases); its argmin
/// basis joins the candidates at every time, so d_min(t) <= D_min.
inline WitnessSeries run_minimized_detection(const BipartiteState& state, const EvolutionSpec& evo,
                                             const TimeGrid& grid, const BasisGrid& bases,
                                             const MinimalDisturbance& minimal, Parallelism par = {}) {
  detail::require_compatible(state, evo);
  const auto& dims = state.dims();
  if (dims.d_a != 2) throw UnsupportedError("run_minimized_detection: only qubit probes (d_A = 2)");

  const Eigen::Index d_b = dims.d_b;
  const std::array<Matrix, 3> sigma{pauli::x(), pauli::y(), pauli::z()};
  std::array<Matrix, 3> local;
  for (int a = 0; a < 3; ++a) local[a] = kron(sigma[a], Matrix::Identity(d_b, d_b));
  const Matrix& rho = state.rho();
  std::vector<Matrix> ops;
  ops.push_back(rho);
  for (int a = 0; a < 3; ++a) ops.push_back(local[a] * rho * local[a]);
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& [a, b] : pairs) {
    const Matrix s = local[a] * rho * local[b];
    ops.push_back(s + s.adjoint());
  }
  std::vector<ReducedDynamics> reduced;
  reduced.reserve(ops.size());
  for (const auto& op : ops) reduced.emplace_back(evo, op, dims);

  const std::array<BasisGrid::Point, 1> incumbent{minimal.point};
  std::vector<double> d_t(grid.size());
  parallel_for(grid.size(), par, [&](std::size_t i) {
    // Hermitian 2x2 blocks stored as (top-left, bottom-right, off-diagonal).
    struct Block {
      double a, d;
      Complex c;
    };
    std::array<Block, 7> r;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const Matrix m = reduced[k].at(grid[i]);
      r[k] = {m(0, 0).real(), m(1, 1).real(), m(0, 1)};
    }
    auto objective = [&](double theta, double phi) {
      const double n[3] = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                           std::cos(theta)};
      double coeff[7] = {1.0,
                         -n[0] * n[0],
                         -n[1] * n[1],
                         -n[2] * n[2],
                         -n[0] * n[1],
                         -n[0] * n[2],
                         -n[1] * n[2]};
      Block diff{0.0, 0.0, 0.0};
      for (std::size_t k = 0; k < r.size(); ++k) {
        diff.a += coeff[k] * r[k].a;
        diff.d += coeff[k] * r[k].d;
        diff.c += coeff[k] * r[k].c;
      }
      const double mean = 0.5 * (diff.a + diff.d);
      const double radius = std::hypot(0.5 * (diff.a - diff.d), std::abs(diff.c));
      return 0.25 * (std::abs(mean - radius) + std::abs(mean + radius));
    };
    d_t[i] = minimize_over_bases(bases, objective, incumbent).value;
  });
  return detail::make_series(grid, std::move(d_t), minimal.value);
}

inline WitnessSeries run_minimized_detection(const BipartiteState& state, const EvolutionSpec& evo,
                                             const TimeGrid& grid, const BasisGrid& bases = {},
                                             Parallelism par = {}) {
  if (state.dims().d_a != 2) {
    throw UnsupportedError("run_minimized_detection: only qubit probes (d_A = 2)");
  }
  return run_minimized_detection(state, evo, grid, bases, minimal_dephasing_disturbance(state, bases), par);
}

struct CorrelationWitness {
  WitnessSeries series;
  /// max_t d(t) > d(0) + 1e-9.
  bool detected = false;
};

/// Compares the probe marginals of rho and (u (x) I) rho (u (x) I)^dagger under
/// the same evolution. A rise above the initial distance reveals correlations.
inline CorrelationWitness classical_correlation_witness(const BipartiteState& state,
                                                        const Matrix& perturbation,
                                                        const EvolutionSpec& evo, const TimeGrid& grid,
                                                        Parallelism par = {}) {
  detail::require_compatible(state, evo);
  const BipartiteState perturbed = apply_local_unitary(state, perturbation);
  const Matrix difference = state.rho() - perturbed.rho();
  auto d_t = detail::reduced_distance_series(evo, difference, state.dims(), grid, par);
  CorrelationWitness out;
  out.series = detail::make_series(grid, std::move(d_t), trace_distance(state, perturbed));
  out.detected = out.series.d_max > out.series.d_t.front() + kSoundnessTol;
  return out;
}

/// (d_A^2 d_B - d_B) / (d_A^2 d_B^2 - 1).
inline double haar_coefficient(const BipartitionDims& dims) {
  const double a2 = static_cast<double>(dims.d_a * dims.d_a);
  const double b = static_cast<double>(dims.d_b);
  return (a2 * b - b) / (a2 * b * b - 1.0);
}

struct HaarEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double predicted = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Monte-Carlo average over Haar-random global unitaries of
/// ||Tr_B U (rho - rho') U^dagger||_2^2, next to the closed-form prediction.
/// Sample i uses its own generator seeded from (seed, i).
inline HaarEstimate haar_average_estimate(const BipartiteState& state, std::size_t n_samples,
                                          std::uint64_t seed, Parallelism par = {}) {
  if (n_samples < 100) throw ContractError("haar_average_estimate: need at least 100 samples");
  const auto eigen = local_eigenbasis(state);
  if (eigen.degenerate) throw DegenerateMarginalError("haar_average_estimate: rho_A is degenerate");
  const auto& dims = state.dims();
  const Matrix difference = state.rho() - dephase(state, eigen.basis).rho();
  std::vector<double> values(n_samples);
  parallel_for(n_samples, par, [&](std::size_t i) {
    const Matrix u = haar_unitary(dims.total(), detail::splitmix64(seed ^ detail::splitmix64(i)));
    values[i] = partial_trace_b(u * difference * u.adjoint(), dims).squaredNorm();
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples)),
          haar_coefficient(dims) * difference.squaredNorm()};
}

}  // namespace discord

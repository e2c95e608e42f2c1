#pragma once

// Trapped ion on the blue sideband: internal qubit {g, e} (probe A) coupled to
// one motional mode (B) by the anti-Jaynes-Cummings interaction
// |g,n> <-> |e,n+1> with Rabi frequency Omega_n.

#include <cmath>
#include <numbers>
#include <vector>

#include "discord/protocol.hpp"

namespace discord::ion {

struct IonParams {
  double omega = 1.0;  // Rabi frequency
  double eta = 0.05;   // Lamb-Dicke parameter
  double nbar = 0.0;
  /// Fock cutoff; negative selects thermal_cutoff(nbar).
  Eigen::Index n_max = -1;
  bool lamb_dicke_limit = true;
};

inline void validate(const IonParams& p) {
  if (!(p.eta > 0.0)) throw ContractError("ion: eta must be positive");
  if (!(p.omega > 0.0)) throw ContractError("ion: omega must be positive");
  if (p.nbar < 0.0) throw ContractError("ion: nbar must be nonnegative");
}

inline Eigen::Index cutoff(const IonParams& p) {
  return p.n_max >= 0 ? p.n_max : thermal_cutoff(p.nbar);
}

/// Omega_n for the |g,n> <-> |e,n+1> transition.
inline double rabi_frequency(const IonParams& p, Eigen::Index n) {
  const double m = static_cast<double>(n) + 1.0;
  if (p.lamb_dicke_limit) return std::sqrt(m) * p.eta * p.omega;
  const double eta2 = p.eta * p.eta;
  return p.eta * std::exp(-eta2) / std::sqrt(m) *
         std::assoc_laguerre(static_cast<unsigned>(n), 1u, eta2) * p.omega;
}

/// t0 = t1 = pi / (2 Omega_0) used for the temperature estimate.
inline double quarter_period(const IonParams& p) {
  return 0.5 * std::numbers::pi / rabi_frequency(p, 0);
}

/// Basis order: A = {g, e}, B = Fock 0..n_max, index a * (n_max + 1) + n.
inline BipartitionDims dims(const IonParams& p) { return {2, cutoff(p) + 1}; }

/// The motional ground state |0> is the first B basis vector; the anti-JC
/// coupling has no partner for |g, n_max>, which is left uncoupled.
inline Matrix build_hamiltonian(const IonParams& p) {
  validate(p);
  const auto d_b = cutoff(p) + 1;
  Matrix h = Matrix::Zero(2 * d_b, 2 * d_b);
  for (Eigen::Index n = 0; n + 1 < d_b; ++n) {
    const double coupling = 0.5 * rabi_frequency(p, n);
    h(d_b + n + 1, n) = coupling;
    h(n, d_b + n + 1) = coupling;
  }
  return h;
}

inline EvolutionSpec evolution(const IonParams& p) {
  return EvolutionSpec::generator(build_hamiltonian(p));
}

/// The internal-state basis {g, e}: rho_A is diagonal in it at all times.
inline ProjectiveBasis internal_basis() { return ProjectiveBasis::computational(2); }

/// |g><g| (x) thermal motion, evolved for t0 under `evo`.
inline BipartiteState prepare_state(const IonParams& p, const EvolutionSpec& evo, double t0) {
  if (t0 < 0.0) throw ContractError("ion: t0 must be nonnegative");
  const auto d_b = cutoff(p) + 1;
  Matrix ground = Matrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  const Matrix rho0 = kron(ground, thermal_fock_state(p.nbar, d_b - 1));
  Matrix rho = evo.evolve(rho0, t0);
  rho = 0.5 * (rho + rho.adjoint());
  return BipartiteState::trusted(std::move(rho), {2, d_b});
}

inline BipartiteState prepare_state(const IonParams& p, double t0) {
  return prepare_state(p, evolution(p), t0);
}

/// |(1/2) sum_n p_n sin(Omega_n t0) sin(Omega_n t1)|.
inline double analytic_local_distance(const IonParams& p, double t0, double t1) {
  validate(p);
  const auto pops = thermal_populations(p.nbar, cutoff(p));
  double d_e = 0.0;
  for (std::size_t n = 0; n < pops.size(); ++n) {
    const double w = rabi_frequency(p, static_cast<Eigen::Index>(n));
    d_e += pops[n] * std::sin(w * t0) * std::sin(w * t1);
  }
  return std::abs(0.5 * d_e);
}

/// sum_n p_n |sin(Omega_n t0 / 2) cos(Omega_n t0 / 2)|.
inline double analytic_disturbance(const IonParams& p, double t0) {
  validate(p);
  const auto pops = thermal_populations(p.nbar, cutoff(p));
  double sum = 0.0;
  for (std::size_t n = 0; n < pops.size(); ++n) {
    const double half = 0.5 * rabi_frequency(p, static_cast<Eigen::Index>(n)) * t0;
    sum += pops[n] * std::abs(std::sin(half) * std::cos(half));
  }
  return sum;
}

/// Excited-state population sum_n p_n sin^2(Omega_n t0 / 2).
inline double excited_population(const IonParams& p, double t0) {
  const auto pops = thermal_populations(p.nbar, cutoff(p));
  double sum = 0.0;
  for (std::size_t n = 0; n < pops.size(); ++n) {
    const double s = std::sin(0.5 * rabi_frequency(p, static_cast<Eigen::Index>(n)) * t0);
    sum += pops[n] * s * s;
  }
  return sum;
}

struct TemperaturePoint {
  double nbar;
  double signal;
};

/// d(t0, t1) at t0 = t1 = pi / (2 Omega_0) for each mean phonon number, with
/// the cutoff chosen per nbar.
inline std::vector<TemperaturePoint> signal_vs_temperature(const IonParams& p,
                                                           const std::vector<double>& nbar_list) {
  std::vector<TemperaturePoint> out;
  const double t = quarter_period(p);
  for (double nbar : nbar_list) {
    IonParams q = p;
    q.nbar = nbar;
    q.n_max = -1;
    out.push_back({nbar, analytic_local_distance(q, t, t)});
  }
  return out;
}

/// Protocol on the simulated state: dephasing in {g, e} at t0, then the
/// local distance over `grid` (the second evolution time t1).
inline WitnessSeries simulate_detection(const IonParams& p, const EvolutionSpec& evo, double t0,
                                        const TimeGrid& grid, Parallelism par = {}) {
  return run_local_detection(prepare_state(p, evo, t0), internal_basis(), evo, grid, par);
}

}  // namespace discord::ion

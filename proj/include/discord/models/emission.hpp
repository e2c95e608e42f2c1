#pragma once

// Spontaneous emission of a two-level atom (A, basis {e, g}) into a band of
// discrete field modes (B), restricted to the single-excitation sector
// span{|e,0>, |g,1_k>}. Mode k has frequency omega_k, uniformly spaced over
// atomic_gap +- half_bandwidth, and couples to the atom with strength g_k.

#include <cmath>
#include <numbers>
#include <vector>

#include "discord/measures.hpp"

namespace discord::emission {

struct EmissionParams {
  Eigen::Index n_modes = 401;
  double half_bandwidth = 20.0;  // Delta; the band has full width 2 Delta
  double coupling = 0.0;         // g; see with_decay_rate
  double atomic_gap = 100.0;     // E_e - E_g
  /// Zero the couplings of the modes above the atomic frequency.
  bool structured = false;

  /// Mode density n_modes / (2 Delta).
  [[nodiscard]] double mode_density() const {
    return static_cast<double>(n_modes) / (2.0 * half_bandwidth);
  }
  /// Gamma = 2 pi g^2 rho for the flat band.
  [[nodiscard]] double decay_rate() const {
    return 2.0 * std::numbers::pi * coupling * coupling * mode_density();
  }
  /// Gamma <= Delta / 20.
  [[nodiscard]] bool regime_valid() const { return decay_rate() <= half_bandwidth / 20.0; }

  /// Flat band with the coupling chosen so that the decay rate is `gamma`.
  static EmissionParams with_decay_rate(double gamma, double half_bandwidth, Eigen::Index n_modes) {
    EmissionParams p;
    p.n_modes = n_modes;
    p.half_bandwidth = half_bandwidth;
    p.coupling = std::sqrt(gamma / (2.0 * std::numbers::pi * p.mode_density()));
    return p;
  }
};

inline void validate(const EmissionParams& p) {
  if (p.n_modes < 2) throw ContractError("emission: need at least two modes");
  if (!(p.half_bandwidth > 0.0)) throw ContractError("emission: bandwidth must be positive");
  if (p.coupling < 0.0) throw ContractError("emission: coupling must be nonnegative");
}

inline std::vector<double> mode_frequencies(const EmissionParams& p) {
  std::vector<double> w(static_cast<std::size_t>(p.n_modes));
  const double step = 2.0 * p.half_bandwidth / static_cast<double>(p.n_modes - 1);
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = p.atomic_gap - p.half_bandwidth + step * static_cast<double>(k);
  }
  return w;
}

inline std::vector<double> mode_couplings(const EmissionParams& p) {
  const auto w = mode_frequencies(p);
  std::vector<double> g(w.size(), p.coupling);
  if (p.structured) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] > p.atomic_gap) g[k] = 0.0;
    }
  }
  return g;
}

/// Sector Hamiltonian: index 0 is |e,0>, index k + 1 is |g,1_k>.
inline Matrix sector_hamiltonian(const EmissionParams& p) {
  validate(p);
  const auto w = mode_frequencies(p);
  const auto g = mode_couplings(p);
  const auto n = p.n_modes;
  Matrix h = Matrix::Zero(n + 1, n + 1);
  h(0, 0) = p.atomic_gap;
  for (Eigen::Index k = 0; k < n; ++k) {
    h(k + 1, k + 1) = w[static_cast<std::size_t>(k)];
    h(0, k + 1) = g[static_cast<std::size_t>(k)];
    h(k + 1, 0) = g[static_cast<std::size_t>(k)];
  }
  return h;
}

/// Hamiltonian on the truncated product space {e, g} (x) {|0>, |1_k>}. The
/// doubly excited states |e,1_k> are kept uncoupled; they are never populated
/// from the sector. Used to validate the sector reduction.
inline Matrix full_space_hamiltonian(const EmissionParams& p) {
  const Matrix sector = sector_hamiltonian(p);
  const auto d_b = p.n_modes + 1;
  Matrix h = Matrix::Zero(2 * d_b, 2 * d_b);
  // A index 0 = e, 1 = g; B index 0 = vacuum, k + 1 = one photon in mode k.
  h(0, 0) = p.atomic_gap;
  for (Eigen::Index k = 1; k < d_b; ++k) {
    h(d_b + k, d_b + k) = sector(k, k);
    h(k, k) = p.atomic_gap + sector(k, k);
    h(0, d_b + k) = sector(0, k);
    h(d_b + k, 0) = sector(k, 0);
  }
  return h;
}

struct AmplitudeSet {
  Complex u00;  // <e,0|U(t)|e,0>
  Vector uk0;   // <g,1_k|U(t)|e,0>
};

/// Exact propagation within the single-excitation sector.
class Sector {
 public:
  explicit Sector(const EmissionParams& p) : params_(p), propagator_(sector_hamiltonian(p)) {}

  [[nodiscard]] const EmissionParams& params() const { return params_; }

  /// U(t) v for a sector vector v.
  [[nodiscard]] Vector evolve(const Vector& v, double t) const {
    const auto& eig = propagator_.spectrum();
    return eig.vectors * propagator_.phases(t).cwiseProduct(eig.vectors.adjoint() * v);
  }

  [[nodiscard]] AmplitudeSet amplitudes(double t) const {
    if (t < 0.0) throw ContractError("emission: t must be nonnegative");
    Vector e0 = Vector::Zero(params_.n_modes + 1);
    e0(0) = 1.0;
    const Vector psi = evolve(e0, t);
    return {psi(0), psi.tail(params_.n_modes)};
  }

  /// Negativity of |Psi(t0)> = u00 |e>|0> + |g>|phi>. The field support is
  /// span{|0>, |phi>}; the state is evaluated there, which a local isometry on
  /// B relates to the full embedding without changing the negativity.
  [[nodiscard]] double negativity(double t0) const {
    const auto amp = amplitudes(t0);
    Vector psi = Vector::Zero(4);
    psi(0) = amp.u00;            // |e, 0>
    psi(3) = amp.uk0.norm();     // |g, phi / |phi|>
    return discord::negativity(BipartiteState::pure(psi, {2, 2}));
  }

  /// Dephase the atom in {e, g} at t0 and compare the atomic marginals at t1.
  /// rho - rho' = a b^dagger + b a^dagger with a = u00 |e,0> and b = |g,phi>;
  /// the atomic marginal of its evolution is diag(delta, -delta) with
  /// delta = 2 Re[(U a)_0 conj((U b)_0)], so d = |delta|.
  [[nodiscard]] double local_signal(double t0, double t1) const {
    if (t1 < t0) throw ContractError("emission: need t1 >= t0");
    const auto amp = amplitudes(t0);
    const auto dim = params_.n_modes + 1;
    Vector a = Vector::Zero(dim);
    a(0) = amp.u00;
    Vector b = Vector::Zero(dim);
    b.tail(params_.n_modes) = amp.uk0;
    const double tau = t1 - t0;
    const Complex ua = evolve(a, tau)(0);
    const Complex ub = evolve(b, tau)(0);
    return std::abs(2.0 * (ua * std::conj(ub)).real());
  }

 private:
  EmissionParams params_;
  Propagator propagator_;
};

inline AmplitudeSet single_excitation_evolve(const EmissionParams& p, double t) {
  return Sector(p).amplitudes(t);
}

inline double transient_negativity(const EmissionParams& p, double t0) { return Sector(p).negativity(t0); }

inline double emission_local_signal(const EmissionParams& p, double t0, double t1) {
  return Sector(p).local_signal(t0, t1);
}

/// sqrt(e^{-Gamma t} (1 - e^{-Gamma t})).
inline double negativity_law_shape(double gamma, double t) {
  const double p = std::exp(-gamma * t);
  return std::sqrt(p * (1.0 - p));
}

struct NegativityLawFit {
  double c = 0.0;              // least-squares prefactor
  double max_relative_dev = 0.0;  // max |ratio / c - 1| over the fit times
  double peak = 0.0;           // max negativity over the fit times
};

/// Fits N(t0) = c sqrt(e^{-Gamma t0}(1 - e^{-Gamma t0})) over `times`.
inline NegativityLawFit fit_negativity_law(const Sector& sector, const std::vector<double>& times) {
  const double gamma = sector.params().decay_rate();
  std::vector<double> n(times.size());
  std::vector<double> f(times.size());
  double num = 0.0;
  double den = 0.0;
  NegativityLawFit fit;
  for (std::size_t i = 0; i < times.size(); ++i) {
    n[i] = sector.negativity(times[i]);
    f[i] = negativity_law_shape(gamma, times[i]);
    num += n[i] * f[i];
    den += f[i] * f[i];
    fit.peak = std::max(fit.peak, n[i]);
  }
  fit.c = num / den;
  for (std::size_t i = 0; i < times.size(); ++i) {
    fit.max_relative_dev = std::max(fit.max_relative_dev, std::abs(n[i] / f[i] / fit.c - 1.0));
  }
  return fit;
}

}  // namespace discord::emission

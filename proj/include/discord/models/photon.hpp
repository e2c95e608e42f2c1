#pragma once

// Photonic models. Continuous variant: polarization (A, basis {H, V}) of a
// photon correlated with its frequency (B), discretized on a uniform grid over
// a Lorentzian line. Discrete variant: polarization with a two-channel momentum
// ancilla.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "discord/protocol.hpp"

namespace discord::photon {

struct PhotonParams {
  double beta = 0.4;         // coherence amplitude, in [0, 1/2]
  double delta_omega = 1.0;  // Lorentzian half-width
  double omega0 = 10.0;      // centre frequency
  double t_prep = 1.0;       // dwell time in the birefringent crystal
  double span = 300.0;       // grid half-span in units of delta_omega
  Eigen::Index points = 1501;
};

inline void validate(const PhotonParams& p) {
  if (p.beta < 0.0 || p.beta > 0.5) throw ContractError("photon: beta must lie in [0, 1/2]");
  if (!(p.delta_omega > 0.0)) throw ContractError("photon: delta_omega must be positive");
  if (p.t_prep < 0.0) throw ContractError("photon: t_prep must be nonnegative");
  if (p.points < 101 || p.points % 2 == 0) throw ContractError("photon: points must be odd and >= 101");
  if (p.span < 40.0) throw ContractError("photon: span must be at least 40 half-widths");
}

struct FrequencyGrid {
  std::vector<double> omega;
  std::vector<double> weight;  // sums to 1
};

/// Uniform grid over omega0 +- span * delta_omega with trapezoidal Lorentzian
/// weights, renormalized.
inline FrequencyGrid frequency_grid(const PhotonParams& p) {
  validate(p);
  const auto m = static_cast<std::size_t>(p.points);
  const double half = p.span * p.delta_omega;
  const double step = 2.0 * half / static_cast<double>(m - 1);
  FrequencyGrid g;
  g.omega.resize(m);
  g.weight.resize(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = -half + step * static_cast<double>(k);
    g.omega[k] = p.omega0 + x;
    const double lorentz = p.delta_omega / std::numbers::pi / (x * x + p.delta_omega * p.delta_omega);
    g.weight[k] = lorentz * step * ((k == 0 || k + 1 == m) ? 0.5 : 1.0);
    total += g.weight[k];
  }
  for (double& w : g.weight) w /= total;
  return g;
}

/// C(t) = sum_k G_k exp(i (omega_k - omega0) t).
inline Complex coherence_function(const PhotonParams& p, double t) {
  const auto g = frequency_grid(p);
  Complex c = 0.0;
  for (std::size_t k = 0; k < g.omega.size(); ++k) {
    c += g.weight[k] * std::polar(1.0, (g.omega[k] - p.omega0) * t);
  }
  return c;
}

/// Post-crystal state: for each frequency, the polarization block
/// [[1/2, beta e^{i(w - w0)t}], [c.c., 1/2]] weighted by G_k.
inline BipartiteState build_correlated_state(const PhotonParams& p) {
  const auto g = frequency_grid(p);
  const auto m = p.points;
  Matrix rho = Matrix::Zero(2 * m, 2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double w = g.weight[static_cast<std::size_t>(k)];
    const Complex c = p.beta * std::polar(1.0, (g.omega[static_cast<std::size_t>(k)] - p.omega0) * p.t_prep);
    rho(k, k) = 0.5 * w;
    rho(m + k, m + k) = 0.5 * w;
    rho(k, m + k) = w * c;
    rho(m + k, k) = w * std::conj(c);
  }
  return BipartiteState::trusted(std::move(rho), {2, m});
}

/// Half-wave plate at angle a: [[cos 2a, sin 2a], [sin 2a, -cos 2a]].
inline Matrix half_wave_plate(double angle) {
  Matrix w(2, 2);
  const double c = std::cos(2.0 * angle);
  const double s = std::sin(2.0 * angle);
  w << c, s, s, -c;
  return w;
}

/// Michelson delay as a function of tau: |V, w> -> e^{-i w tau} |V, w>,
/// applied between half-wave plates at angle eta_angle,
/// U(tau) = (W^dagger (x) I) D(tau) (W (x) I).
inline EvolutionSpec michelson_propagator(const PhotonParams& p, double eta_angle = 0.0) {
  const auto g = frequency_grid(p);
  const auto m = p.points;
  auto phases = [omega = g.omega, m](double tau) {
    Vector u(2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
      u(k) = 1.0;
      u(m + k) = std::polar(1.0, -omega[static_cast<std::size_t>(k)] * tau);
    }
    return u;
  };
  return EvolutionSpec::diagonal(2 * m, phases, half_wave_plate(eta_angle));
}

/// (beta / 2) |e^{-dw |t + tau|} - e^{-dw |t - tau|}|.
inline double analytic_local_distance(const PhotonParams& p, double tau) {
  const double dw = p.delta_omega;
  return 0.5 * p.beta *
         std::abs(std::exp(-dw * std::abs(p.t_prep + tau)) - std::exp(-dw * std::abs(p.t_prep - tau)));
}

/// max over tau, reached at tau = t: (beta / 2)(1 - e^{-2 dw t}).
inline double analytic_peak_distance(const PhotonParams& p) {
  return 0.5 * p.beta * (1.0 - std::exp(-2.0 * p.delta_omega * p.t_prep));
}

/// Continuum dephasing disturbance beta * int G(w) |sin((w - w0) t)| dw.
/// Gauss-Legendre on every half period of the sine out to at least 4 * span
/// half-widths, ending on a whole half period; beyond that the sine is replaced
/// by its mean 2/pi.
inline double analytic_disturbance(const PhotonParams& p) {
  validate(p);
  const double t = p.t_prep;
  if (t == 0.0 || p.beta == 0.0) return 0.0;
  const double dw = p.delta_omega;
  static constexpr std::array<double, 10> nodes{
      0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
      0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
      0.9639719272779138, 0.9931285991850949};
  static constexpr std::array<double, 10> weights{
      0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
      0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
      0.0406014298003869, 0.0176140071391521};
  auto integrand = [&](double x) {
    return dw / std::numbers::pi / (x * x + dw * dw) * std::abs(std::sin(x * t));
  };
  const double half_period = std::numbers::pi / t;
  const double periods = std::ceil(4.0 * p.span * dw / half_period);
  const double limit = periods * half_period;
  double sum = 0.0;
  for (double k = 0.0; k < periods; k += 1.0) {
    const double start = k * half_period;
    // Panels narrower than the local Lorentzian scale x + dw.
    const double panels = std::clamp(std::ceil(half_period / (0.5 * (start + dw))), 1.0, 256.0);
    const double width = half_period / panels;
    for (double j = 0.0; j < panels; j += 1.0) {
      const double mid = start + (j + 0.5) * width;
      const double rad = 0.5 * width;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * rad * (integrand(mid - rad * nodes[i]) + integrand(mid + rad * nodes[i]));
      }
    }
  }
  // Both tails of the Lorentzian carry mass 1 - (2/pi) atan(limit / dw).
  const double tail = 1.0 - 2.0 / std::numbers::pi * std::atan(limit / dw);
  return p.beta * (2.0 * sum + tail * 2.0 / std::numbers::pi);
}

struct DiscreteAncillaParams {
  double lambda = 0.5;
  double theta = std::numbers::pi / 4.0;
};

/// lambda |H,0><H,0| + (1 - lambda) |theta,1><theta,1| with
/// |theta> = cos(theta)|H> + sin(theta)|V>.
inline BipartiteState build_discrete_state(const DiscreteAncillaParams& p) {
  if (p.lambda < 0.0 || p.lambda > 1.0) throw ContractError("photon-dv: lambda must lie in [0, 1]");
  Vector h_0 = Vector::Zero(4);
  h_0(0) = 1.0;
  Vector theta_1 = Vector::Zero(4);
  theta_1(1) = std::cos(p.theta);
  theta_1(3) = std::sin(p.theta);
  return BipartiteState(p.lambda * projector(h_0) + (1.0 - p.lambda) * projector(theta_1), {2, 2});
}

/// Phase shift on V in momentum channel 1: generator |V><V| (x) |1><1|.
inline Matrix discrete_phase_generator() {
  Matrix h = Matrix::Zero(4, 4);
  h(3, 3) = 1.0;
  return h;
}

/// Default perturbation for the classical-correlation step: a half-wave plate
/// at pi/8, which maps {H, V} to the diagonal basis.
inline Matrix discrete_perturbation() { return half_wave_plate(std::numbers::pi / 8.0); }

}  // namespace discord::photon

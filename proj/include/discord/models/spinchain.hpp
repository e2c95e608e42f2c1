#pragma once

// Open transverse-field Ising chain with power-law couplings,
//   H = -sum_{i<j} J0 / |i - j|^alpha sx_i sx_j - B sum_i sy_i,
// probed through its left-most spin (spin 1 = A = most significant bit).

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "discord/protocol.hpp"

namespace discord::spinchain {

struct ChainParams {
  int n_spins = 8;
  double alpha = 1.0;
  double j0 = 1.0;
  double b_field = 1.0;
  double kT = 0.0;
};

inline void validate(const ChainParams& p) {
  if (p.n_spins < 2 || p.n_spins > 12) throw ContractError("spinchain: n_spins must lie in [2, 12]");
  if (!(p.alpha > 0.0)) throw ContractError("spinchain: alpha must be positive");
  if (p.j0 < 0.0) throw ContractError("spinchain: j0 must be nonnegative");
  if (p.kT < 0.0) throw ContractError("spinchain: kT must be nonnegative");
}

inline BipartitionDims dims(const ChainParams& p) {
  return {2, Eigen::Index{1} << (p.n_spins - 1)};
}

inline TimeGrid default_time_grid(const ChainParams& p) {
  return TimeGrid::uniform(20.0 / (p.j0 > 0.0 ? p.j0 : 1.0), 400);
}

namespace detail {

inline std::size_t bit_of(int spin, int n) { return std::size_t{1} << (n - 1 - spin); }

// Upper bound on ||H||_2 from the coupling sums.
inline double norm_bound(const ChainParams& p) {
  double sum = std::abs(p.b_field) * p.n_spins;
  for (int i = 0; i < p.n_spins; ++i) {
    for (int j = i + 1; j < p.n_spins; ++j) sum += p.j0 / std::pow(j - i, p.alpha);
  }
  return sum;
}

// H in the product basis of sigma_y eigenstates, bit 0 = |+y>, bit 1 = |-y>.
// There sigma_y is diagonal and sigma_x |+y> = i|-y>, sigma_x |-y> = -i|+y>.
inline Matrix hamiltonian_y_basis(const ChainParams& p) {
  const int n = p.n_spins;
  const std::size_t dim = std::size_t{1} << n;
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    const auto col = static_cast<Eigen::Index>(s);
    double field = 0.0;
    for (int i = 0; i < n; ++i) field += (s & bit_of(i, n)) ? -1.0 : 1.0;
    h(col, col) += -p.b_field * field;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const std::size_t mi = bit_of(i, n);
        const std::size_t mj = bit_of(j, n);
        const Complex fi = (s & mi) ? Complex(0, -1) : Complex(0, 1);
        const Complex fj = (s & mj) ? Complex(0, -1) : Complex(0, 1);
        const auto row = static_cast<Eigen::Index>(s ^ mi ^ mj);
        h(row, col) += -p.j0 / std::pow(j - i, p.alpha) * fi * fj;
      }
    }
  }
  return h;
}

// Maps coefficient columns from the y product basis to the computational
// basis by applying (|+y>, |-y>) = [[1, 1], [i, -i]] / sqrt(2) on every spin.
inline Matrix y_to_z(Matrix v, int n) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::size_t dim = std::size_t{1} << n;
  for (int i = 0; i < n; ++i) {
    const std::size_t m = bit_of(i, n);
    for (std::size_t s = 0; s < dim; ++s) {
      if (s & m) continue;
      const auto lo = static_cast<Eigen::Index>(s);
      const auto hi = static_cast<Eigen::Index>(s | m);
      const Eigen::RowVectorXcd plus = v.row(lo);
      const Eigen::RowVectorXcd minus = v.row(hi);
      v.row(lo) = r * (plus + minus);
      v.row(hi) = Complex(0, r) * (plus - minus);
    }
  }
  return v;
}

}  // namespace detail

/// Dense Hamiltonian in the computational (sigma_z) basis.
inline Matrix build_chain_hamiltonian(const ChainParams& p) {
  validate(p);
  const int n = p.n_spins;
  const std::size_t dim = std::size_t{1} << n;
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    const auto col = static_cast<Eigen::Index>(s);
    for (int i = 0; i < n; ++i) {
      const std::size_t mi = detail::bit_of(i, n);
      // sigma_y |0> = i|1>, sigma_y |1> = -i|0>.
      h(static_cast<Eigen::Index>(s ^ mi), col) += -p.b_field * ((s & mi) ? Complex(0, -1) : Complex(0, 1));
      for (int j = i + 1; j < n; ++j) {
        const std::size_t mj = detail::bit_of(j, n);
        h(static_cast<Eigen::Index>(s ^ mi ^ mj), col) += -p.j0 / std::pow(j - i, p.alpha);
      }
    }
  }
  return h;
}

/// P = sigma_y (x) ... (x) sigma_y, the pi rotation about y up to a global phase.
inline Matrix parity_operator(int n_spins) {
  Matrix p = pauli::y();
  for (int i = 1; i < n_spins; ++i) p = kron(p, pauli::y());
  return p;
}

struct SpectralData {
  RealVector energies;      // ascending
  Matrix states;            // columns, computational basis
  std::vector<int> parities;

  [[nodiscard]] HermitianEigen eigen() const { return {energies, states}; }
};

/// Exact diagonalization inside the two parity sectors. In the sigma_y product
/// basis P is diagonal with eigenvalue (-1)^(number of |-y> spins), so each
/// eigenvector carries an exact parity regardless of degeneracies.
inline SpectralData diagonalize(const ChainParams& p) {
  validate(p);
  const int n = p.n_spins;
  const Matrix h = detail::hamiltonian_y_basis(p);
  const auto dim = h.rows();
  std::vector<double> energies;
  std::vector<int> parities;
  Matrix vectors_y = Matrix::Zero(dim, dim);
  Eigen::Index column = 0;
  for (int parity : {1, -1}) {
    std::vector<Eigen::Index> sector;
    for (Eigen::Index s = 0; s < dim; ++s) {
      const int sign = (std::popcount(static_cast<unsigned>(s)) % 2 == 0) ? 1 : -1;
      if (sign == parity) sector.push_back(s);
    }
    const auto m = static_cast<Eigen::Index>(sector.size());
    Matrix block(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) block(a, b) = h(sector[a], sector[b]);
    }
    const auto eig = eig_hermitian(block);
    for (Eigen::Index k = 0; k < m; ++k, ++column) {
      energies.push_back(eig.values(k));
      parities.push_back(parity);
      for (Eigen::Index a = 0; a < m; ++a) vectors_y(sector[a], column) = eig.vectors(a, k);
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return energies[static_cast<std::size_t>(a)] < energies[static_cast<std::size_t>(b)];
  });
  SpectralData out;
  out.energies.resize(dim);
  Matrix sorted(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.energies(k) = energies[static_cast<std::size_t>(src)];
    out.parities.push_back(parities[static_cast<std::size_t>(src)]);
    sorted.col(k) = vectors_y.col(src);
  }
  out.states = detail::y_to_z(std::move(sorted), n);
  return out;
}

struct GroundState {
  Vector psi;
  double energy;
  double gap;  // E_1 - E_0
  int parity;
  /// Gap below 1e-10: the witness is reported for the lowest eigenvector but
  /// the physical ground state is effectively degenerate.
  bool near_degenerate;
};

inline constexpr double kNearDegenerateGap = 1e-10;

/// Lowest eigenvector. Throws when the two lowest levels cannot be told apart:
/// equal within eigensolver accuracy, or degenerate inside one parity sector.
inline GroundState ground_state(const ChainParams& p, const SpectralData& spectrum) {
  const double gap = spectrum.energies(1) - spectrum.energies(0);
  const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * detail::norm_bound(p);
  const bool same_sector = spectrum.parities[0] == spectrum.parities[1];
  if (gap <= resolution || (same_sector && gap < kNearDegenerateGap)) {
    throw UnsupportedError("spinchain: ground state is degenerate (gap " + std::to_string(gap) + ")");
  }
  return {spectrum.states.col(0), spectrum.energies(0), gap, spectrum.parities[0],
          gap < kNearDegenerateGap};
}

/// Dephasing basis of spin 1: the sigma_y eigenbasis.
inline ProjectiveBasis y_basis() { return ProjectiveBasis::bloch(0.5 * std::numbers::pi, 0.5 * std::numbers::pi); }

struct GroundStateDetection {
  WitnessSeries series;  // trace-distance form, bound = negativity
  std::vector<double> magnetization_d_t;  // (1/2)|m_y(t) - m_y(0)|
  double negativity = 0.0;
  double disturbance = 0.0;  // trace distance between psi and its dephasing
  GroundState ground;
};

namespace detail {

// (|psi><psi| + S|psi><psi|S) / 2 with S = sigma_y on spin 1, as the two
// vectors whose projectors it averages.
inline std::pair<Vector, Vector> dephased_components(const Vector& psi, Eigen::Index d_b) {
  const Matrix s = kron(pauli::y(), Matrix::Identity(d_b, d_b));
  return {psi, s * psi};
}

}  // namespace detail

inline GroundStateDetection ground_state_detection(const ChainParams& p, const SpectralData& spectrum,
                                                   const TimeGrid& grid, Parallelism par = {}) {
  const auto bip = dims(p);
  GroundStateDetection out;
  out.ground = ground_state(p, spectrum);
  const auto state = BipartiteState::pure(out.ground.psi, bip);
  const auto evo = EvolutionSpec::from_spectrum(spectrum.eigen());
  out.series = run_local_detection(state, y_basis(), evo, grid, par);
  out.disturbance = *out.series.bound_ref;
  out.negativity = negativity(state);
  out.series.bound_ref = out.negativity;

  // m_y(t) = Tr[sigma_y^(1) U rho_Phi U^dagger] from the energy-basis coherence
  // sum: sum_ij e^{-i(E_i - E_j)t} (rho_Phi)_ij (S)_ji.
  const Matrix& v = spectrum.states;
  const auto [a, b] = detail::dephased_components(out.ground.psi, bip.d_b);
  const Vector a_e = v.adjoint() * a;
  const Vector b_e = v.adjoint() * b;
  const Matrix s_e = v.adjoint() * kron(pauli::y(), Matrix::Identity(bip.d_b, bip.d_b)) * v;
  const Matrix rho_e = 0.5 * (a_e * a_e.adjoint() + b_e * b_e.adjoint());
  const Matrix weights = rho_e.cwiseProduct(s_e.transpose());
  const auto& energies = spectrum.energies;
  auto magnetization = [&](double t) {
    Vector phase(energies.size());
    for (Eigen::Index i = 0; i < phase.size(); ++i) phase(i) = std::polar(1.0, -energies(i) * t);
    const Complex m = phase.transpose() * (weights * phase.conjugate());
    return m.real();
  };
  const double m0 = magnetization(0.0);
  out.magnetization_d_t.resize(grid.size());
  parallel_for(grid.size(), par, [&](std::size_t i) {
    out.magnetization_d_t[i] = 0.5 * std::abs(magnetization(grid[i]) - m0);
  });
  return out;
}

inline GroundStateDetection ground_state_detection(const ChainParams& p, const TimeGrid& grid,
                                                   Parallelism par = {}) {
  return ground_state_detection(p, diagonalize(p), grid, par);
}

struct Excitation {
  double energy;
  double population;  // c_j
  int parity;
};

/// c_j = <Psi_j| rho_Phi |Psi_j> for the dephased ground state.
inline std::vector<Excitation> excitation_overlaps(const ChainParams& p, const SpectralData& spectrum) {
  const auto ground = ground_state(p, spectrum);
  const auto [a, b] = detail::dephased_components(ground.psi, dims(p).d_b);
  const Vector a_e = spectrum.states.adjoint() * a;
  const Vector b_e = spectrum.states.adjoint() * b;
  std::vector<Excitation> out;
  for (Eigen::Index j = 0; j < a_e.size(); ++j) {
    out.push_back({spectrum.energies(j), 0.5 * (std::norm(a_e(j)) + std::norm(b_e(j))),
                   spectrum.parities[static_cast<std::size_t>(j)]});
  }
  return out;
}

struct AutocorrelationPoint {
  double t;
  double value;
  double imag_residue;
};

/// C(t) = Tr[rho_Phi U rho_Phi U^dagger] / Tr[rho_Phi^2] via the coherence sum
/// sum_ij |(rho_Phi)_ij|^2 e^{-i(E_i - E_j)t} in the energy basis.
inline std::vector<AutocorrelationPoint> autocorrelation(const ChainParams& p, const SpectralData& spectrum,
                                                         const TimeGrid& grid) {
  const auto ground = ground_state(p, spectrum);
  const auto [a, b] = detail::dephased_components(ground.psi, dims(p).d_b);
  const Vector a_e = spectrum.states.adjoint() * a;
  const Vector b_e = spectrum.states.adjoint() * b;
  const Matrix rho_e = 0.5 * (a_e * a_e.adjoint() + b_e * b_e.adjoint());
  const Matrix weights = rho_e.cwiseAbs2().cast<Complex>();
  const double purity = rho_e.cwiseAbs2().sum();
  std::vector<AutocorrelationPoint> out;
  for (double t : grid.samples()) {
    Vector phase(spectrum.energies.size());
    for (Eigen::Index i = 0; i < phase.size(); ++i) phase(i) = std::polar(1.0, -spectrum.energies(i) * t);
    const Complex c = phase.transpose() * (weights * phase.conjugate());
    out.push_back({t, c.real() / purity, c.imag() / purity});
  }
  return out;
}

/// e^{-H/kT} / Z built from the spectrum.
inline BipartiteState gibbs_state(const ChainParams& p, const SpectralData& spectrum) {
  if (!(p.kT > 0.0)) throw ContractError("spinchain: thermal state needs kT > 0");
  const auto& e = spectrum.energies;
  RealVector w(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) w(i) = std::exp(-(e(i) - e(0)) / p.kT);
  w /= w.sum();
  Matrix rho = spectrum.states * w.cast<Complex>().asDiagonal() * spectrum.states.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return BipartiteState::trusted(std::move(rho), dims(p));
}

struct ThermalDetection {
  WitnessSeries d_min_series;  // bound = D_min
  double d_min_bound = 0.0;    // D_min
  BasisGrid::Point argmin_basis{0.0, 0.0};
};

inline ThermalDetection thermal_detection(const ChainParams& p, const SpectralData& spectrum,
                                          const TimeGrid& grid, const BasisGrid& bases = {},
                                          Parallelism par = {}) {
  const auto state = gibbs_state(p, spectrum);
  const auto evo = EvolutionSpec::from_spectrum(spectrum.eigen());
  const auto minimal = minimal_dephasing_disturbance(state, bases);
  ThermalDetection out;
  out.d_min_series = run_minimized_detection(state, evo, grid, bases, minimal, par);
  out.d_min_bound = minimal.value;
  out.argmin_basis = minimal.point;
  return out;
}

inline ThermalDetection thermal_detection(const ChainParams& p, const TimeGrid& grid,
                                          const BasisGrid& bases = {}, Parallelism par = {}) {
  return thermal_detection(p, diagonalize(p), grid, bases, par);
}

}  // namespace discord::spinchain

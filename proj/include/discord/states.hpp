#pragma once

// Bipartite states, projective bases on the probe, and the local channels
// that act on them: dephasing (pinching) and local unitaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "discord/tensor.hpp"

namespace discord {

inline constexpr double kStateTol = 1e-10;
/// Adjacent eigenvalues of rho_A closer than this count as degenerate.
inline constexpr double kDegeneracyGap = 1e-8;

/// Density operator on H_A (x) H_B with the probe A as first factor.
class BipartiteState {
 public:
  /// Validates Hermiticity, unit trace and positivity (all to 1e-10).
  BipartiteState(Matrix rho, BipartitionDims dims) : rho_(std::move(rho)), dims_(dims) {
    require_split(rho_, dims_, "BipartiteState");
    require_hermitian(rho_, "BipartiteState");
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > kStateTol) {
      throw ContractError("BipartiteState: trace is " + std::to_string(trace));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kStateTol) {
      throw ContractError("BipartiteState: operator is not positive semidefinite");
    }
  }

  /// Skips the spectral positivity check. For states that are density
  /// operators by construction (channel outputs, block-structured models),
  /// where a dense eigendecomposition would dominate the cost.
  static BipartiteState trusted(Matrix rho, BipartitionDims dims) {
    require_split(rho, dims, "BipartiteState");
    return BipartiteState(std::move(rho), dims, Unchecked{});
  }

  static BipartiteState pure(const Vector& psi, BipartitionDims dims) {
    if (psi.size() != dims.total()) throw DimensionError("pure state: vector size mismatch");
    const double norm = psi.norm();
    if (norm == 0.0) throw ContractError("pure state: zero vector");
    const Vector unit = psi / norm;
    return trusted(unit * unit.adjoint(), dims);
  }

  static BipartiteState product(const Matrix& rho_a, const Matrix& rho_b) {
    return BipartiteState(kron(rho_a, rho_b), {rho_a.rows(), rho_b.rows()});
  }

  [[nodiscard]] const Matrix& rho() const { return rho_; }
  [[nodiscard]] const BipartitionDims& dims() const { return dims_; }
  [[nodiscard]] Matrix marginal_a() const { return partial_trace_b(rho_, dims_); }
  [[nodiscard]] Matrix marginal_b() const { return partial_trace_a(rho_, dims_); }

 private:
  struct Unchecked {};
  BipartiteState(Matrix rho, BipartitionDims dims, Unchecked)
      : rho_(std::move(rho)), dims_(dims) {}

  Matrix rho_;
  BipartitionDims dims_;
};

/// Orthonormal basis of H_A stored as the columns of a unitary matrix.
class ProjectiveBasis {
 public:
  explicit ProjectiveBasis(Matrix vectors) : vectors_(std::move(vectors)) {
    require_square(vectors_, "ProjectiveBasis");
    if (unitarity_defect(vectors_) > kStateTol) {
      throw ContractError("ProjectiveBasis: vectors are not orthonormal");
    }
  }

  static ProjectiveBasis computational(Eigen::Index dim) {
    return ProjectiveBasis(Matrix::Identity(dim, dim));
  }

  /// Qubit basis whose first vector has Bloch angles (theta, phi).
  static ProjectiveBasis bloch(double theta, double phi) {
    Matrix v(2, 2);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    v(0, 0) = c;
    v(1, 0) = std::polar(s, phi);
    v(0, 1) = -std::polar(s, -phi);
    v(1, 1) = c;
    return ProjectiveBasis(std::move(v));
  }

  [[nodiscard]] Eigen::Index dim() const { return vectors_.cols(); }
  [[nodiscard]] const Matrix& vectors() const { return vectors_; }
  [[nodiscard]] Vector vector(Eigen::Index i) const { return vectors_.col(i); }
  [[nodiscard]] Matrix projector(Eigen::Index i) const { return discord::projector(vector(i)); }

 private:
  Matrix vectors_;
};

/// sum_m p_m |phi_m><phi_m| (x) rho_B^m.
inline BipartiteState zero_discord_state(std::span<const double> weights,
                                         const ProjectiveBasis& basis_a,
                                         std::span<const Matrix> states_b) {
  const auto d_a = basis_a.dim();
  if (static_cast<Eigen::Index>(weights.size()) != d_a ||
      static_cast<Eigen::Index>(states_b.size()) != d_a) {
    throw DimensionError("zero_discord_state: need one weight and one B state per basis vector");
  }
  double total = 0.0;
  for (double p : weights) {
    if (p < 0.0) throw ContractError("zero_discord_state: negative weight");
    total += p;
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw ContractError("zero_discord_state: weights do not sum to 1");
  }
  const auto d_b = states_b.front().rows();
  Matrix rho = Matrix::Zero(d_a * d_b, d_a * d_b);
  for (Eigen::Index m = 0; m < d_a; ++m) {
    const Matrix& sigma = states_b[static_cast<std::size_t>(m)];
    if (sigma.rows() != d_b) throw DimensionError("zero_discord_state: B states differ in size");
    // Validates sigma as a density operator.
    (void)BipartiteState(sigma, {1, d_b});
    rho += weights[static_cast<std::size_t>(m)] * kron(basis_a.projector(m), sigma);
  }
  return BipartiteState::trusted(std::move(rho), {d_a, d_b});
}

namespace detail {

// (W^dagger (x) I) rho (W (x) I), computed block by block.
inline Matrix to_local_basis(const Matrix& rho, const Matrix& w, Eigen::Index d_b) {
  const auto d_a = w.rows();
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < d_a; ++c) {
    for (Eigen::Index d = 0; d < d_a; ++d) {
      const auto block = rho.block(c * d_b, d * d_b, d_b, d_b);
      for (Eigen::Index i = 0; i < d_a; ++i) {
        for (Eigen::Index j = 0; j < d_a; ++j) {
          const Complex coeff = std::conj(w(c, i)) * w(d, j);
          if (coeff != Complex(0.0)) out.block(i * d_b, j * d_b, d_b, d_b) += coeff * block;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// sum_i (Pi_i (x) I) rho (Pi_i (x) I) for the rank-one projectors of `basis`.
inline BipartiteState dephase(const BipartiteState& state, const ProjectiveBasis& basis) {
  const auto& dims = state.dims();
  if (basis.dim() != dims.d_a) throw DimensionError("dephase: basis does not live on A");
  const auto d_b = dims.d_b;
  const Matrix& w = basis.vectors();
  const Matrix local = detail::to_local_basis(state.rho(), w, d_b);
  Matrix out = Matrix::Zero(dims.total(), dims.total());
  for (Eigen::Index i = 0; i < dims.d_a; ++i) {
    const auto diag_block = local.block(i * d_b, i * d_b, d_b, d_b);
    for (Eigen::Index a = 0; a < dims.d_a; ++a) {
      for (Eigen::Index b = 0; b < dims.d_a; ++b) {
        const Complex coeff = w(a, i) * std::conj(w(b, i));
        if (coeff != Complex(0.0)) out.block(a * d_b, b * d_b, d_b, d_b) += coeff * diag_block;
      }
    }
  }
  return BipartiteState::trusted(std::move(out), dims);
}

struct LocalEigenbasis {
  ProjectiveBasis basis;
  RealVector eigenvalues;  // descending
  bool degenerate = false;
};

/// Rescales each column so that its largest-magnitude entry is real positive.
inline void fix_phases(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    const Complex pivot = vectors(arg, c);
    if (std::abs(pivot) > 0.0) vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
}

/// Eigenbasis of rho_A = Tr_B rho, eigenvalues in descending order.
inline LocalEigenbasis local_eigenbasis(const BipartiteState& state) {
  const Matrix rho_a = state.marginal_a();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho_a + rho_a.adjoint()));
  const auto n = rho_a.rows();
  Matrix vectors(n, n);
  RealVector values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    values(i) = solver.eigenvalues()(n - 1 - i);
  }
  fix_phases(vectors);
  bool degenerate = false;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (values(i) - values(i + 1) < kDegeneracyGap) degenerate = true;
  }
  return {ProjectiveBasis(std::move(vectors)), std::move(values), degenerate};
}

/// (u_A (x) I) rho (u_A (x) I)^dagger.
inline BipartiteState apply_local_unitary(const BipartiteState& state, const Matrix& u_a) {
  require_unitary(u_a, "apply_local_unitary");
  if (u_a.rows() != state.dims().d_a) throw DimensionError("apply_local_unitary: u is not on A");
  // to_local_basis computes (W^dagger (x) I) rho (W (x) I); take W = u^dagger.
  return BipartiteState::trusted(detail::to_local_basis(state.rho(), u_a.adjoint(), state.dims().d_b),
                                 state.dims());
}

/// Haar-distributed unitary: complex Ginibre matrix, QR, column phases fixed so
/// that the triangular factor has a real positive diagonal.
template <class Rng>
Matrix haar_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw ContractError("haar_unitary: dimension must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline Matrix haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(dim, rng);
}

inline constexpr double kThermalTailTol = 1e-8;

/// Smallest n with sum_{k>n} p_k < 1e-8 (floor 20), plus two levels of
/// headroom for couplings that raise the phonon number.
inline Eigen::Index thermal_cutoff(double nbar) {
  if (nbar < 0.0) throw ContractError("thermal_cutoff: negative mean occupation");
  Eigen::Index n = 0;
  if (nbar > 0.0) {
    // Tail beyond n is r^{n+1} with r = nbar / (nbar + 1).
    const double r = nbar / (nbar + 1.0);
    n = static_cast<Eigen::Index>(std::ceil(std::log(kThermalTailTol) / std::log(r) - 1.0));
    while (n > 0 && std::pow(r, static_cast<double>(n)) < kThermalTailTol) --n;
    while (std::pow(r, static_cast<double>(n + 1)) >= kThermalTailTol) ++n;
  }
  return std::max<Eigen::Index>(n, 20) + 2;
}

/// Unnormalized thermal occupation nbar^n / (nbar + 1)^{n+1}.
inline double thermal_population(double nbar, Eigen::Index n) {
  if (nbar == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(n) * std::log(nbar / (nbar + 1.0))) / (nbar + 1.0);
}

/// Truncated thermal populations p_0..p_{n_max}, renormalized to sum 1.
inline std::vector<double> thermal_populations(double nbar, Eigen::Index n_max) {
  if (nbar < 0.0) throw ContractError("thermal state: negative mean occupation");
  if (n_max < 0) throw ContractError("thermal state: negative cutoff");
  if (nbar > 0.0) {
    const double tail = std::pow(nbar / (nbar + 1.0), static_cast<double>(n_max + 1));
    if (tail >= kThermalTailTol) {
      throw ContractError("thermal state: cutoff " + std::to_string(n_max) +
                          " leaves tail mass " + std::to_string(tail));
    }
  }
  std::vector<double> p(static_cast<std::size_t>(n_max + 1));
  double total = 0.0;
  for (Eigen::Index n = 0; n <= n_max; ++n) {
    p[static_cast<std::size_t>(n)] = thermal_population(nbar, n);
    total += p[static_cast<std::size_t>(n)];
  }
  for (double& x : p) x /= total;
  return p;
}

inline Matrix thermal_fock_state(double nbar, Eigen::Index n_max) {
  const auto p = thermal_populations(nbar, n_max);
  Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
  for (Eigen::Index n = 0; n <= n_max; ++n) rho(n, n) = p[static_cast<std::size_t>(n)];
  return rho;
}

}  // namespace discord

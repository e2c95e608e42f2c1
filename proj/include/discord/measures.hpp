#pragma once

// Distances and discord quantifiers: trace distance, Hilbert-Schmidt distance,
// dephasing disturbance (eigenbasis and basis-minimized) and negativity.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "discord/states.hpp"

namespace discord {

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": operands differ in dimension");
  }
}

/// (1/2) Tr |a - b|.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "trace_distance");
  require_hermitian(a, "trace_distance");
  require_hermitian(b, "trace_distance");
  return 0.5 * trace_norm(a - b);
}

namespace detail {

// True when x_{(a,k),(b,l)} = 0 for all k != l, i.e. x is block diagonal in the
// computational basis of B. Such operators (classical on B) have a trace norm
// that splits into d_B blocks of size d_A.
inline bool classical_on_b(const Matrix& x, const BipartitionDims& dims) {
  const auto d_b = dims.d_b;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      if (r % d_b != c % d_b && x(r, c) != Complex(0.0)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Trace norm of an operator on H_A (x) H_B, using the block structure when
/// the operator is classical on B.
inline double bipartite_trace_norm(const Matrix& x, const BipartitionDims& dims) {
  require_split(x, dims, "bipartite_trace_norm");
  if (dims.d_b == 1 || !detail::classical_on_b(x, dims)) return trace_norm(x);
  double sum = 0.0;
  Matrix block(dims.d_a, dims.d_a);
  for (Eigen::Index k = 0; k < dims.d_b; ++k) {
    for (Eigen::Index a = 0; a < dims.d_a; ++a) {
      for (Eigen::Index b = 0; b < dims.d_a; ++b) block(a, b) = x(a * dims.d_b + k, b * dims.d_b + k);
    }
    sum += trace_norm(block);
  }
  return sum;
}

/// Trace distance between two states on the same bipartition.
inline double trace_distance(const BipartiteState& a, const BipartiteState& b) {
  if (!(a.dims() == b.dims())) throw DimensionError("trace_distance: bipartitions differ");
  return 0.5 * bipartite_trace_norm(a.rho() - b.rho(), a.dims());
}

/// Tr[(a - b)^dagger (a - b)].
inline double hs_distance_sq(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hs_distance_sq");
  return (a - b).squaredNorm();
}

/// (||rho^Gamma||_1 - 1) / 2 with the full trace norm, clipped at zero.
inline double negativity(const BipartiteState& state) {
  const double value = 0.5 * (trace_norm(partial_transpose_a(state.rho(), state.dims())) - 1.0);
  return value > 0.0 ? value : 0.0;
}

/// Trace distance between rho and its dephasing in the eigenbasis of rho_A.
/// Throws DegenerateMarginalError when that eigenbasis is ambiguous.
inline double dephasing_disturbance(const BipartiteState& state) {
  const auto eigen = local_eigenbasis(state);
  if (eigen.degenerate) {
    throw DegenerateMarginalError(
        "dephasing_disturbance: rho_A has a degenerate spectrum; use "
        "minimal_dephasing_disturbance");
  }
  return trace_distance(state, dephase(state, eigen.basis));
}

/// Grid over qubit dephasing bases. A basis is identified with the Bloch
/// direction of its first vector; antipodal directions give the same basis, so
/// only the upper hemisphere theta in [0, pi/2] is sampled. The pole is
/// sampled once and the equator only for phi in [0, pi).
struct BasisGrid {
  int n_theta = 60;
  int n_phi = 120;

  struct Point {
    double theta;
    double phi;
  };

  [[nodiscard]] double theta_step() const { return 0.5 * std::numbers::pi / (n_theta - 1); }
  [[nodiscard]] double phi_step() const { return 2.0 * std::numbers::pi / n_phi; }

  [[nodiscard]] std::vector<Point> points() const {
    if (n_theta < 2 || n_phi < 2) throw ContractError("BasisGrid: need n_theta, n_phi >= 2");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n_theta * n_phi));
    for (int i = 0; i < n_theta; ++i) {
      const double theta = i * theta_step();
      for (int j = 0; j < n_phi; ++j) {
        if (i == 0 && j > 0) break;
        // Equator: phi and phi + pi are the same basis.
        if (i == n_theta - 1 && 2 * j >= n_phi) break;
        out.push_back({theta, j * phi_step()});
      }
    }
    return out;
  }
};

/// Maps arbitrary Bloch angles onto the sampled hemisphere.
inline BasisGrid::Point canonical_bloch(double theta, double phi) {
  constexpr double pi = std::numbers::pi;
  if (theta < 0.0) {
    theta = -theta;
    phi += pi;
  }
  if (theta > pi) {
    theta = 2.0 * pi - theta;
    phi += pi;
  }
  if (theta > 0.5 * pi) {
    theta = pi - theta;
    phi += pi;
  }
  phi = std::fmod(phi, 2.0 * pi);
  if (phi < 0.0) phi += 2.0 * pi;
  return {theta, phi};
}

struct BasisMinimum {
  double value = 0.0;
  BasisGrid::Point point{0.0, 0.0};
};

/// Grid search followed by two rounds of step halving over the 3x3
/// neighbourhood of the incumbent. Ties keep the earliest evaluated point.
/// `extra` points are evaluated after the grid and before refinement.
template <class Objective>
BasisMinimum minimize_over_bases(const BasisGrid& grid, Objective&& objective,
                                 std::span<const BasisGrid::Point> extra = {}) {
  BasisMinimum best{INFINITY, {0.0, 0.0}};
  auto consider = [&](BasisGrid::Point p) {
    const double v = objective(p.theta, p.phi);
    if (v < best.value) best = {v, p};
  };
  for (const auto& p : grid.points()) consider(p);
  for (const auto& p : extra) consider(p);
  double d_theta = grid.theta_step();
  double d_phi = grid.phi_step();
  for (int round = 0; round < 2; ++round) {
    d_theta *= 0.5;
    d_phi *= 0.5;
    const auto centre = best.point;
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        if (i == 0 && j == 0) continue;
        consider(canonical_bloch(centre.theta + i * d_theta, centre.phi + j * d_phi));
      }
    }
  }
  return best;
}

namespace detail {

// Sum of singular values via the spectrum of c^dagger c.
inline double schatten1_gram(const Matrix& c) {
  if (c.rows() == 1 || c.cols() == 1) return c.norm();
  const Matrix gram = c.cols() <= c.rows() ? Matrix(c.adjoint() * c) : Matrix(c * c.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (double lambda : solver.eigenvalues()) sum += std::sqrt(std::max(lambda, 0.0));
  return sum;
}

// For a qubit probe, rho - Phi(rho) = Pi_0 rho Pi_1 + h.c., whose trace norm is
// twice that of the d_B x d_B block C = <phi_0| rho |phi_1>. The trace distance
// is therefore ||C||_1. When rho has low rank, C = L R^dagger is evaluated
// through thin QR factors so that no sqrt-of-roundoff terms enter the sum.
class QubitDephasingDistance {
 public:
  explicit QubitDephasingDistance(const BipartiteState& state) {
    const auto& dims = state.dims();
    d_b_ = dims.d_b;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(state.rho());
    const auto& w = solver.eigenvalues();
    const double w_max = w.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      if (w(k) > 1e-14 * w_max) keep.push_back(k);
    }
    rank_ = static_cast<Eigen::Index>(keep.size());
    if (2 * rank_ <= d_b_) {
      for (int a = 0; a < 2; ++a) {
        factors_[a] = Matrix(d_b_, rank_);
        for (Eigen::Index c = 0; c < rank_; ++c) {
          const auto k = keep[static_cast<std::size_t>(c)];
          factors_[a].col(c) = std::sqrt(w(k)) * solver.eigenvectors().col(k).segment(a * d_b_, d_b_);
        }
      }
    } else {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) blocks_[a][b] = state.rho().block(a * d_b_, b * d_b_, d_b_, d_b_);
      }
    }
  }

  double operator()(const Vector& phi0, const Vector& phi1) const {
    if (2 * rank_ <= d_b_) {
      // L = sum_a conj(phi0_a) F_a, R = sum_b conj(phi1_b) F_b, C = L R^dagger.
      const Matrix left = std::conj(phi0(0)) * factors_[0] + std::conj(phi0(1)) * factors_[1];
      const Matrix right = std::conj(phi1(0)) * factors_[0] + std::conj(phi1(1)) * factors_[1];
      if (rank_ == 1) return left.norm() * right.norm();
      Eigen::HouseholderQR<Matrix> ql(left);
      Eigen::HouseholderQR<Matrix> qr(right);
      const Matrix rl = ql.matrixQR().topRows(rank_).triangularView<Eigen::Upper>();
      const Matrix rr = qr.matrixQR().topRows(rank_).triangularView<Eigen::Upper>();
      Eigen::JacobiSVD<Matrix> svd(rl * rr.adjoint());
      return svd.singularValues().sum();
    }
    Matrix c = Matrix::Zero(d_b_, d_b_);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) c += std::conj(phi0(a)) * phi1(b) * blocks_[a][b];
    }
    return schatten1_gram(c);
  }

 private:
  Eigen::Index d_b_ = 0;
  Eigen::Index rank_ = 0;
  std::array<Matrix, 2> factors_;
  std::array<std::array<Matrix, 2>, 2> blocks_;
};

}  // namespace detail

struct MinimalDisturbance {
  double value = 0.0;
  ProjectiveBasis basis = ProjectiveBasis::computational(2);
  BasisGrid::Point point{0.0, 0.0};
};

/// min over qubit dephasing bases of ||rho - (Phi_Pi (x) I) rho||.
inline MinimalDisturbance minimal_dephasing_disturbance(const BipartiteState& state,
                                                        const BasisGrid& grid = {}) {
  if (state.dims().d_a != 2) {
    throw UnsupportedError("minimal_dephasing_disturbance: only qubit probes (d_A = 2)");
  }
  const detail::QubitDephasingDistance distance(state);
  const auto best = minimize_over_bases(grid, [&](double theta, double phi) {
    const auto basis = ProjectiveBasis::bloch(theta, phi);
    return distance(basis.vector(0), basis.vector(1));
  });
  return {best.value, ProjectiveBasis::bloch(best.point.theta, best.point.phi), best.point};
}

}  // namespace discord

#pragma once

// Dense complex linear algebra on a bipartite space H_A (x) H_B.
//
// Index convention, used everywhere in the library: the probe A is the slow
// (leftmost) tensor index, so the basis vector |i>|k> sits at row i * d_B + k.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "discord/errors.hpp"

namespace discord {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

struct BipartitionDims {
  Eigen::Index d_a = 1;
  Eigen::Index d_b = 1;

  [[nodiscard]] Eigen::Index total() const { return d_a * d_b; }
  friend bool operator==(const BipartitionDims&, const BipartitionDims&) = default;
};

/// Largest entry-wise deviation |m - m^dagger|.
inline double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest entry-wise deviation |U^dagger U - I|.
inline double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

inline bool is_unitary(const Matrix& u, double tol = kUnitaryTol) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline void require_hermitian(const Matrix& m, const char* what) {
  require_square(m, what);
  if (const double defect = hermiticity_defect(m); defect > kHermitianTol) {
    throw ContractError(std::string(what) + ": operator is not Hermitian (defect " +
                        std::to_string(defect) + ")");
  }
}

inline void require_unitary(const Matrix& u, const char* what) {
  require_square(u, what);
  if (const double defect = unitarity_defect(u); defect > kUnitaryTol) {
    throw ContractError(std::string(what) + ": operator is not unitary (defect " +
                        std::to_string(defect) + ")");
  }
}

inline void require_split(const Matrix& m, const BipartitionDims& dims, const char* what) {
  require_square(m, what);
  if (dims.d_a < 1 || dims.d_b < 1 || m.rows() != dims.total()) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                         " does not split as " + std::to_string(dims.d_a) + " x " +
                         std::to_string(dims.d_b));
  }
}

/// (A (x) B)[(i*db + k), (j*db + l)] = A[i][j] * B[k][l].
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix partial_trace_b(const Matrix& rho, const BipartitionDims& dims) {
  require_split(rho, dims, "partial_trace_b");
  const auto db = dims.d_b;
  Matrix out(dims.d_a, dims.d_a);
  for (Eigen::Index i = 0; i < dims.d_a; ++i) {
    for (Eigen::Index j = 0; j < dims.d_a; ++j) {
      out(i, j) = rho.block(i * db, j * db, db, db).trace();
    }
  }
  return out;
}

inline Matrix partial_trace_a(const Matrix& rho, const BipartitionDims& dims) {
  require_split(rho, dims, "partial_trace_a");
  const auto db = dims.d_b;
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < dims.d_a; ++i) out += rho.block(i * db, i * db, db, db);
  return out;
}

/// result[(i,k),(j,l)] = rho[(j,k),(i,l)]: transposes the A index only.
inline Matrix partial_transpose_a(const Matrix& rho, const BipartitionDims& dims) {
  require_split(rho, dims, "partial_transpose_a");
  const auto db = dims.d_b;
  Matrix out(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < dims.d_a; ++i) {
    for (Eigen::Index j = 0; j < dims.d_a; ++j) {
      out.block(i * db, j * db, db, db) = rho.block(j * db, i * db, db, db);
    }
  }
  return out;
}

/// Spectral decomposition h = V diag(values) V^dagger, values ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};

inline HermitianEigen eig_hermitian(const Matrix& h) {
  require_hermitian(h, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw ContractError("eig_hermitian: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

// Eigenvalues of a 2x2 Hermitian matrix in closed form.
inline std::pair<double, double> eigenvalues_2x2(const Matrix& x) {
  const double a = x(0, 0).real();
  const double d = x(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(x(0, 1)));
  return {mean - radius, mean + radius};
}

inline double hermitian_abs_sum(const Matrix& x) {
  if (x.rows() == 1) return std::abs(x(0, 0).real());
  if (x.rows() == 2) {
    const auto [lo, hi] = eigenvalues_2x2(x);
    return std::abs(lo) + std::abs(hi);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace detail

/// Full trace norm Tr sqrt(X^dagger X), i.e. the sum of singular values.
/// Callers that want the trace distance apply the factor 1/2 themselves.
inline double trace_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (x.rows() == x.cols() && hermiticity_defect(x) <= 1e-13 * scale) {
    return detail::hermitian_abs_sum(0.5 * (x + x.adjoint()));
  }
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

/// Cached spectral form of a Hermitian generator; U(t) = V e^{-i values t} V^dagger
/// with hbar = 1. Read-only after construction.
class Propagator {
 public:
  explicit Propagator(const Matrix& generator) : eigen_(eig_hermitian(generator)) {}
  explicit Propagator(HermitianEigen eigen) : eigen_(std::move(eigen)) {}

  [[nodiscard]] Eigen::Index dim() const { return eigen_.values.size(); }
  [[nodiscard]] const HermitianEigen& spectrum() const { return eigen_; }

  [[nodiscard]] Vector phases(double t) const {
    Vector p(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) p(i) = std::polar(1.0, -eigen_.values(i) * t);
    return p;
  }

  [[nodiscard]] Matrix unitary(double t) const {
    return eigen_.vectors * phases(t).asDiagonal() * eigen_.vectors.adjoint();
  }

  [[nodiscard]] Matrix evolve(const Matrix& rho, double t) const {
    if (rho.rows() != dim() || rho.cols() != dim()) {
      throw DimensionError("evolve: state and generator dimensions differ");
    }
    const Vector p = phases(t);
    Matrix in_eigenbasis = eigen_.vectors.adjoint() * rho * eigen_.vectors;
    for (Eigen::Index j = 0; j < dim(); ++j) {
      for (Eigen::Index i = 0; i < dim(); ++i) in_eigenbasis(i, j) *= p(i) * std::conj(p(j));
    }
    return eigen_.vectors * in_eigenbasis * eigen_.vectors.adjoint();
  }

 private:
  HermitianEigen eigen_;
};

/// U(t) rho U(t)^dagger for U(t) = exp(-i h t).
inline Matrix evolve(const Matrix& rho, const Matrix& h, double t) {
  return Propagator(h).evolve(rho, t);
}

/// Pauli matrices and small helpers shared by the models.
namespace pauli {
inline Matrix identity() { return Matrix::Identity(2, 2); }
inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

inline double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

}  // namespace discord

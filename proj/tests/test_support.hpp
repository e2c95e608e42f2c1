#pragma once

// Random instances and slow reference implementations used as oracles.

#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "discord/discord.hpp"

namespace testing_support {

using discord::BipartitionDims;
using discord::Complex;
using discord::Matrix;
using discord::Vector;

inline Vector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v.normalized();
}

inline Matrix random_density(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(n, rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = Complex(normal(rng), normal(rng));
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline Matrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = Complex(normal(rng), normal(rng));
  }
  return 0.5 * scale * (g + g.adjoint());
}

// Index formula written out independently of the library.
inline Matrix oracle_partial_trace_b(const Matrix& rho, Eigen::Index d_a, Eigen::Index d_b) {
  Matrix out = Matrix::Zero(d_a, d_a);
  for (Eigen::Index i = 0; i < d_a; ++i)
    for (Eigen::Index j = 0; j < d_a; ++j)
      for (Eigen::Index k = 0; k < d_b; ++k) out(i, j) += rho(i * d_b + k, j * d_b + k);
  return out;
}

inline Matrix oracle_partial_trace_a(const Matrix& rho, Eigen::Index d_a, Eigen::Index d_b) {
  Matrix out = Matrix::Zero(d_b, d_b);
  for (Eigen::Index k = 0; k < d_b; ++k)
    for (Eigen::Index l = 0; l < d_b; ++l)
      for (Eigen::Index i = 0; i < d_a; ++i) out(k, l) += rho(i * d_b + k, i * d_b + l);
  return out;
}

inline double oracle_trace_norm(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

inline Matrix oracle_partial_transpose_a(const Matrix& rho, Eigen::Index d_a, Eigen::Index d_b) {
  Matrix out(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < d_a; ++i)
    for (Eigen::Index j = 0; j < d_a; ++j)
      for (Eigen::Index k = 0; k < d_b; ++k)
        for (Eigen::Index l = 0; l < d_b; ++l) out(j * d_b + k, i * d_b + l) = rho(i * d_b + k, j * d_b + l);
  return out;
}

inline double oracle_negativity(const Matrix& rho, Eigen::Index d_a, Eigen::Index d_b) {
  return std::max(0.0, 0.5 * (oracle_trace_norm(oracle_partial_transpose_a(rho, d_a, d_b)) - 1.0));
}

// exp(-i h t) via Eigen's matrix exponential (Pade), not the spectral route.
inline Matrix oracle_unitary(const Matrix& h, double t) {
  const Matrix arg = Complex(0.0, -t) * h;
  return arg.exp();
}

// Pinching in the basis given by the columns of w.
inline Matrix oracle_dephase(const Matrix& rho, const Matrix& w, Eigen::Index d_b) {
  const Eigen::Index d_a = w.rows();
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < d_a; ++i) {
    const Matrix p = discord::kron(w.col(i) * w.col(i).adjoint(), Matrix::Identity(d_b, d_b));
    out += p * rho * p;
  }
  return out;
}

// Negativity of a pure two-qubit-probe state from its Schmidt coefficients:
// sqrt(l0 l1) for squared coefficients l0, l1.
inline double schmidt_negativity(const Vector& psi, Eigen::Index d_a, Eigen::Index d_b) {
  Matrix m(d_a, d_b);
  for (Eigen::Index i = 0; i < d_a; ++i)
    for (Eigen::Index k = 0; k < d_b; ++k) m(i, k) = psi(i * d_b + k);
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto s = svd.singularValues();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) sum += s(i);
  return 0.5 * (sum * sum - 1.0);
}

}  // namespace testing_support

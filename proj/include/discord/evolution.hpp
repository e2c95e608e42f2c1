#pragma once

// Global unitary dynamics and its image on the probe: Tr_B U(t) X U(t)^dagger.

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "discord/states.hpp"

namespace discord {

/// Ascending sample times starting at 0.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty() || samples_.front() != 0.0) {
      throw ContractError("TimeGrid: first sample must be 0");
    }
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      if (!(samples_[i] > samples_[i - 1])) {
        throw ContractError("TimeGrid: samples must be strictly increasing");
      }
    }
  }

  /// n points evenly spaced over [0, t_max].
  static TimeGrid uniform(double t_max, std::size_t n) {
    if (n < 2 || !(t_max > 0.0)) throw ContractError("TimeGrid: need n >= 2 and t_max > 0");
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return TimeGrid(std::move(s));
  }

  [[nodiscard]] const std::vector<double>& samples() const { return samples_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
};

/// Time evolution on the full space. Either a Hermitian generator (with its
/// spectral decomposition cached) or a closed-form propagator supplied by a
/// model. Closed forms come in two shapes:
///   diagonal: U(t) = (W^dagger (x) I) diag(u(t)) (W (x) I) for a fixed
///             unitary W on A, with u(t) given in the product basis;
///   dense:    U(t) returned as a full matrix.
class EvolutionSpec {
 public:
  using DiagonalFn = std::function<Vector(double)>;
  using DenseFn = std::function<Matrix(double)>;

  static EvolutionSpec generator(const Matrix& h) {
    return from_spectrum(eig_hermitian(h));
  }

  static EvolutionSpec from_spectrum(HermitianEigen spectrum) {
    EvolutionSpec spec(Kind::Generator, spectrum.values.size());
    spec.spectrum_ = std::make_shared<const HermitianEigen>(std::move(spectrum));
    return spec;
  }

  static EvolutionSpec diagonal(Eigen::Index dim, DiagonalFn phases, Matrix frame_a = Matrix()) {
    EvolutionSpec spec(Kind::Diagonal, dim);
    spec.diagonal_ = std::move(phases);
    if (frame_a.size() != 0) {
      require_unitary(frame_a, "EvolutionSpec frame");
      if (dim % frame_a.rows() != 0) throw DimensionError("EvolutionSpec: frame does not divide dim");
      spec.frame_ = std::move(frame_a);
    }
    spec.validate_closed_form();
    return spec;
  }

  static EvolutionSpec dense(Eigen::Index dim, DenseFn unitary) {
    EvolutionSpec spec(Kind::Dense, dim);
    spec.dense_ = std::move(unitary);
    spec.validate_closed_form();
    return spec;
  }

  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] bool is_generator() const { return kind_ == Kind::Generator; }
  [[nodiscard]] const HermitianEigen& spectrum() const {
    if (!spectrum_) throw UnsupportedError("EvolutionSpec: closed-form propagator has no spectrum");
    return *spectrum_;
  }

  [[nodiscard]] Matrix unitary(double t) const {
    switch (kind_) {
      case Kind::Generator: {
        Vector p(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) p(i) = std::polar(1.0, -spectrum_->values(i) * t);
        return spectrum_->vectors * p.asDiagonal() * spectrum_->vectors.adjoint();
      }
      case Kind::Diagonal: {
        const Vector u = checked_diagonal(t);
        Matrix out = u.asDiagonal();
        if (frame_.size() != 0) out = detail::to_local_basis(out, frame_, dim_ / frame_.rows());
        return out;
      }
      case Kind::Dense: {
        Matrix u = dense_(t);
        if (u.rows() != dim_ || u.cols() != dim_) throw DimensionError("EvolutionSpec: propagator size");
        return u;
      }
    }
    return {};
  }

  /// U(t) rho U(t)^dagger.
  [[nodiscard]] Matrix evolve(const Matrix& rho, double t) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("evolve: dimension mismatch");
    if (kind_ == Kind::Generator) return Propagator(*spectrum_).evolve(rho, t);
    const Matrix u = unitary(t);
    return u * rho * u.adjoint();
  }

 private:
  friend class ReducedDynamics;
  enum class Kind { Generator, Diagonal, Dense };

  EvolutionSpec(Kind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {
    if (dim < 1) throw DimensionError("EvolutionSpec: empty space");
  }

  [[nodiscard]] Vector checked_diagonal(double t) const {
    Vector u = diagonal_(t);
    if (u.size() != dim_) throw DimensionError("EvolutionSpec: diagonal propagator size");
    return u;
  }

  // U(0) = I and unitarity on a few sample times, both to 1e-10.
  void validate_closed_form() const {
    if (kind_ == Kind::Diagonal) {
      // The frame is unitary, so only the diagonal needs checking.
      for (double t : {0.0, 0.37, 1.9, 11.3}) {
        const Vector u = checked_diagonal(t);
        for (Eigen::Index i = 0; i < dim_; ++i) {
          if (std::abs(std::abs(u(i)) - 1.0) > kUnitaryTol) {
            throw ContractError("EvolutionSpec: closed-form propagator is not unitary");
          }
          if (t == 0.0 && std::abs(u(i) - 1.0) > kUnitaryTol) {
            throw ContractError("EvolutionSpec: closed-form propagator has U(0) != I");
          }
        }
      }
      return;
    }
    for (double t : {0.0, 0.37, 1.9, 11.3}) {
      const Matrix u = unitary(t);
      if (unitarity_defect(u) > kUnitaryTol) {
        throw ContractError("EvolutionSpec: closed-form propagator is not unitary");
      }
      if (t == 0.0 && (u - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > kUnitaryTol) {
        throw ContractError("EvolutionSpec: closed-form propagator has U(0) != I");
      }
    }
  }

  Kind kind_;
  Eigen::Index dim_;
  std::shared_ptr<const HermitianEigen> spectrum_;
  DiagonalFn diagonal_;
  DenseFn dense_;
  Matrix frame_;
};

/// t -> Tr_B U(t) X U(t)^dagger for a fixed Hermitian operator X, with the
/// t-independent work done once at construction.
///
/// Generator path: with X~ = V^dagger X V and G^{ab}_{ij} = sum_k V_{(a,k),i}
/// conj(V_{(b,k),j}), the (a,b) entry at time t is sum_ij e_i X~_ij G^{ab}_ij
/// conj(e_j) with e_i = exp(-i E_i t). Each entry costs O(dim^2) per time.
class ReducedDynamics {
 public:
  ReducedDynamics(const EvolutionSpec& evo, const Matrix& x, BipartitionDims dims)
      : evo_(&evo), dims_(dims) {
    require_split(x, dims, "ReducedDynamics");
    if (evo.dim() != dims.total()) throw DimensionError("ReducedDynamics: evolution dimension mismatch");
    const auto d_a = dims.d_a;
    const auto d_b = dims.d_b;
    switch (evo.kind_) {
      case EvolutionSpec::Kind::Generator: {
        const Matrix& v = evo.spectrum_->vectors;
        const Matrix rotated = v.adjoint() * x * v;
        kernels_.resize(static_cast<std::size_t>(d_a * d_a));
        for (Eigen::Index a = 0; a < d_a; ++a) {
          for (Eigen::Index b = a; b < d_a; ++b) {
            const Matrix g = v.middleRows(a * d_b, d_b).transpose() * v.middleRows(b * d_b, d_b).conjugate();
            kernels_[index(a, b)] = rotated.cwiseProduct(g);
          }
        }
        break;
      }
      case EvolutionSpec::Kind::Diagonal: {
        Matrix framed = x;
        if (evo.frame_.size() != 0) {
          if (evo.frame_.rows() != d_a) throw DimensionError("ReducedDynamics: frame is not on A");
          framed = detail::to_local_basis(x, evo.frame_.adjoint(), d_b);
        }
        diagonals_.resize(static_cast<std::size_t>(d_a * d_a));
        for (Eigen::Index a = 0; a < d_a; ++a) {
          for (Eigen::Index b = a; b < d_a; ++b) {
            Vector diag(d_b);
            for (Eigen::Index k = 0; k < d_b; ++k) diag(k) = framed(a * d_b + k, b * d_b + k);
            diagonals_[index(a, b)] = std::move(diag);
          }
        }
        break;
      }
      case EvolutionSpec::Kind::Dense:
        operator_ = x;
        break;
    }
  }

  [[nodiscard]] Matrix at(double t) const {
    const auto d_a = dims_.d_a;
    const auto d_b = dims_.d_b;
    Matrix out(d_a, d_a);
    switch (evo_->kind_) {
      case EvolutionSpec::Kind::Generator: {
        const auto& energies = evo_->spectrum_->values;
        Vector e(energies.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = std::polar(1.0, -energies(i) * t);
        const Vector e_conj = e.conjugate();
        for (Eigen::Index a = 0; a < d_a; ++a) {
          for (Eigen::Index b = a; b < d_a; ++b) {
            out(a, b) = e.transpose() * (kernels_[index(a, b)] * e_conj);
            out(b, a) = std::conj(out(a, b));
          }
        }
        break;
      }
      case EvolutionSpec::Kind::Diagonal: {
        const Vector u = evo_->checked_diagonal(t);
        for (Eigen::Index a = 0; a < d_a; ++a) {
          for (Eigen::Index b = a; b < d_a; ++b) {
            Complex sum = 0.0;
            const Vector& diag = diagonals_[index(a, b)];
            for (Eigen::Index k = 0; k < d_b; ++k) {
              sum += u(a * d_b + k) * diag(k) * std::conj(u(b * d_b + k));
            }
            out(a, b) = sum;
            out(b, a) = std::conj(sum);
          }
        }
        if (evo_->frame_.size() != 0) out = evo_->frame_.adjoint() * out * evo_->frame_;
        break;
      }
      case EvolutionSpec::Kind::Dense: {
        const Matrix u = evo_->unitary(t);
        out = partial_trace_b(u * operator_ * u.adjoint(), dims_);
        break;
      }
    }
    return 0.5 * (out + out.adjoint());
  }

 private:
  [[nodiscard]] std::size_t index(Eigen::Index a, Eigen::Index b) const {
    return static_cast<std::size_t>(a * dims_.d_a + b);
  }

  const EvolutionSpec* evo_;
  BipartitionDims dims_;
  std::vector<Matrix> kernels_;
  std::vector<Vector> diagonals_;
  Matrix operator_;
};

}  // namespace discord

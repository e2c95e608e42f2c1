#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace discord;
using namespace testing_support;

namespace {

// -sum_{i<j} J0 / |i-j|^alpha sigma_x^i sigma_x^j - B sum_i sigma_y^i from
// explicit Kronecker products.
Matrix oracle_hamiltonian(const spinchain::ChainParams& p) {
  const int n = p.n_spins;
  auto site = [&](const Matrix& op, int k) {
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, i == k ? op : pauli::identity());
    return out;
  };
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    h -= p.b_field * site(pauli::y(), i);
    for (int j = i + 1; j < n; ++j) h -= p.j0 / std::pow(j - i, p.alpha) * site(pauli::x(), i) * site(pauli::x(), j);
  }
  return h;
}

spinchain::ChainParams chain(int n, double b, double kT = 0.0) {
  spinchain::ChainParams p;
  p.n_spins = n;
  p.b_field = b;
  p.kT = kT;
  return p;
}

}  // namespace

TEST(SpinChain, HamiltonianMatchesKroneckerOracle) {
  auto p = chain(4, 0.7);
  p.alpha = 1.5;
  EXPECT_LT((spinchain::build_chain_hamiltonian(p) - oracle_hamiltonian(p)).norm(), 1e-13);
}

TEST(SpinChain, CommutesWithParity) {
  const auto p = chain(5, 1.3);
  const Matrix h = spinchain::build_chain_hamiltonian(p);
  const Matrix parity = spinchain::parity_operator(5);
  EXPECT_LT((h * parity - parity * h).norm(), 1e-12);
  EXPECT_TRUE(is_unitary(parity));
}

TEST(SpinChain, TwoSpinSpectrum) {
  // {-sqrt(J^2 + 4B^2), -J, J, sqrt(J^2 + 4B^2)}.
  for (double b : {0.3, 1.0, 2.5}) {
    const auto sp = spinchain::diagonalize(chain(2, b));
    const double r = std::sqrt(1.0 + 4.0 * b * b);
    EXPECT_NEAR(sp.energies(0), -r, 1e-13);
    EXPECT_NEAR(sp.energies(1), -1.0, 1e-13);
    EXPECT_NEAR(sp.energies(2), 1.0, 1e-13);
    EXPECT_NEAR(sp.energies(3), r, 1e-13);
  }
}

TEST(SpinChain, EigenpairsAndParities) {
  const auto p = chain(6, 0.8);
  const auto sp = spinchain::diagonalize(p);
  const Matrix h = spinchain::build_chain_hamiltonian(p);
  const Matrix parity = spinchain::parity_operator(6);
  EXPECT_LT((sp.states.adjoint() * sp.states - Matrix::Identity(64, 64)).norm(), 1e-12);
  for (Eigen::Index k = 0; k < 64; ++k) {
    const Vector v = sp.states.col(k);
    EXPECT_LT((h * v - sp.energies(k) * v).norm(), 1e-11);
    EXPECT_LT((parity * v - static_cast<double>(sp.parities[static_cast<std::size_t>(k)]) * v).norm(), 1e-12);
  }
  const auto full = eig_hermitian(h);
  EXPECT_LT((full.values - sp.energies).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(SpinChain, GroundStateDetectionIdentities) {
  const auto p = chain(6, 1.0);
  const auto sp = spinchain::diagonalize(p);
  const auto grid = TimeGrid::uniform(10.0, 80);
  const auto r = spinchain::ground_state_detection(p, sp, grid);
  EXPECT_FALSE(r.ground.near_degenerate);
  EXPECT_GT(r.ground.gap, 1e-3);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(r.series.d_t[i], r.magnetization_d_t[i], 1e-10);
  EXPECT_LE(r.series.d_max, r.negativity + 1e-9);
  EXPECT_NEAR(r.negativity, oracle_negativity(projector(r.ground.psi), 2, 32), 1e-10);
  for (const auto& e : spinchain::excitation_overlaps(p, sp)) {
    if (e.parity != r.ground.parity) EXPECT_LE(e.population, 1e-10);
  }
}

TEST(SpinChain, AutocorrelationMatchesDirectEvolution) {
  const auto p = chain(4, 0.9);
  const auto sp = spinchain::diagonalize(p);
  const auto ground = spinchain::ground_state(p, sp);
  const Matrix s = kron(pauli::y(), Matrix::Identity(8, 8));
  const Matrix rho_phi = 0.5 * (projector(ground.psi) + s * projector(ground.psi) * s);
  const Matrix h = spinchain::build_chain_hamiltonian(p);
  const auto grid = TimeGrid::uniform(5.0, 11);
  const auto c = spinchain::autocorrelation(p, sp, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Matrix u = oracle_unitary(h, grid[i]);
    const double direct = (rho_phi * u * rho_phi * u.adjoint()).trace().real() / purity(rho_phi);
    EXPECT_NEAR(c[i].value, direct, 1e-10);
    EXPECT_LT(std::abs(c[i].imag_residue), 1e-12);
  }
  EXPECT_NEAR(c[0].value, 1.0, 1e-12);
}

TEST(SpinChain, GibbsState) {
  const auto p = chain(4, 1.2, 0.5);
  const auto sp = spinchain::diagonalize(p);
  const auto g = spinchain::gibbs_state(p, sp);
  const Matrix h = spinchain::build_chain_hamiltonian(p);
  EXPECT_NEAR(g.rho().trace().real(), 1.0, 1e-13);
  EXPECT_LT((g.rho() * h - h * g.rho()).norm(), 1e-12);
  // Boltzmann ratio between the two lowest levels.
  const double ratio = (sp.states.col(1).adjoint() * g.rho() * sp.states.col(1))(0, 0).real() /
                       (sp.states.col(0).adjoint() * g.rho() * sp.states.col(0))(0, 0).real();
  EXPECT_NEAR(ratio, std::exp(-(sp.energies(1) - sp.energies(0)) / 0.5), 1e-12);
  EXPECT_THROW((void)spinchain::gibbs_state(chain(4, 1.2, 0.0), sp), ContractError);
}

TEST(SpinChain, ColdGibbsMatchesGroundNegativity) {
  const auto p = chain(5, 1.5, 1e-5);
  const auto sp = spinchain::diagonalize(p);
  const auto th = spinchain::thermal_detection(p, sp, TimeGrid::uniform(5.0, 6), BasisGrid{30, 60});
  const auto ground = spinchain::ground_state_detection(p, sp, TimeGrid({0.0}));
  EXPECT_NEAR(th.d_min_bound, ground.negativity, 1e-6);
  EXPECT_TRUE(th.d_min_series.sound());
}

TEST(SpinChain, DegenerateGroundStateThrows) {
  const auto p = chain(4, 0.0);
  EXPECT_THROW((void)spinchain::ground_state(p, spinchain::diagonalize(p)), UnsupportedError);
  EXPECT_THROW((void)spinchain::diagonalize(chain(1, 1.0)), ContractError);
}

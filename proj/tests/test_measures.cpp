#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace discord;
using namespace testing_support;

namespace {

BipartiteState bell_state() {
  Vector psi(4);
  psi << 1.0, 0.0, 0.0, 1.0;
  return BipartiteState::pure(psi, {2, 2});
}

// Dephasing distance in an explicit basis, straight from the definition.
double oracle_basis_distance(const BipartiteState& s, const ProjectiveBasis& b) {
  return 0.5 * oracle_trace_norm(s.rho() - oracle_dephase(s.rho(), b.vectors(), s.dims().d_b));
}

}  // namespace

TEST(TraceDistance, Examples) {
  Vector zero(2), one(2), plus(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(trace_distance(projector(zero), projector(one)), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(projector(zero), projector(zero)), 0.0, 1e-15);
  // Pure states: sqrt(1 - |<a|b>|^2).
  EXPECT_NEAR(trace_distance(projector(zero), projector(plus)), std::sqrt(0.5), 1e-15);
  EXPECT_THROW((void)trace_distance(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), DimensionError);
}

TEST(TraceDistance, ContractiveUnderPartialTrace) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteState a(random_density(6, 3, rng), {2, 3});
    const BipartiteState b(random_density(6, 6, rng), {2, 3});
    EXPECT_LE(trace_distance(a.marginal_a(), b.marginal_a()), trace_distance(a, b) + 1e-12);
    EXPECT_LE(trace_distance(a, b), 1.0 + 1e-12);
  }
}

TEST(BipartiteTraceNorm, MatchesOracle) {
  std::mt19937_64 rng(22);
  const BipartitionDims dims{2, 5};
  const Matrix x = random_hermitian(10, rng);
  EXPECT_NEAR(bipartite_trace_norm(x, dims), oracle_trace_norm(x), 1e-11);
  // Block-diagonal in the B index takes the blockwise route.
  Matrix classical = Matrix::Zero(10, 10);
  for (int k = 0; k < 5; ++k) {
    const Matrix block = random_hermitian(2, rng);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) classical(a * 5 + k, b * 5 + k) = block(a, b);
  }
  EXPECT_NEAR(bipartite_trace_norm(classical, dims), oracle_trace_norm(classical), 1e-12);
}

TEST(Negativity, Examples) {
  EXPECT_NEAR(negativity(bell_state()), 0.5, 1e-14);
  EXPECT_NEAR(negativity(BipartiteState(Matrix::Identity(4, 4) / 4.0, {2, 2})), 0.0, 1e-15);
  // Werner state p |Bell><Bell| + (1 - p) I/4: N = max(0, (3p - 1)/4).
  for (double p : {0.1, 1.0 / 3.0, 0.5, 0.9}) {
    const Matrix rho = p * bell_state().rho() + (1.0 - p) * Matrix::Identity(4, 4) / 4.0;
    EXPECT_NEAR(negativity(BipartiteState(rho, {2, 2})), std::max(0.0, (3.0 * p - 1.0) / 4.0), 1e-14);
  }
}

TEST(Negativity, MatchesOracleAndLocalInvariance) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const BipartiteState s(random_density(6, 2, rng), {2, 3});
    const double n = negativity(s);
    EXPECT_NEAR(n, oracle_negativity(s.rho(), 2, 3), 1e-12);
    const Matrix u = kron(haar_unitary(2, rng), haar_unitary(3, rng));
    EXPECT_NEAR(negativity(BipartiteState::trusted(u * s.rho() * u.adjoint(), {2, 3})), n, 1e-12);
  }
}

TEST(DephasingDisturbance, PureStateEqualsSchmidtNegativity) {
  std::mt19937_64 rng(24);
  for (int db : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vector psi = random_vector(2 * db, rng);
      const auto s = BipartiteState::pure(psi, {2, db});
      EXPECT_NEAR(dephasing_disturbance(s), schmidt_negativity(psi, 2, db), 1e-10);
    }
  }
  // cos a |00> + sin a |11>: sin(2a) / 2.
  const double a = 0.3;
  Vector psi = Vector::Zero(4);
  psi(0) = std::cos(a);
  psi(3) = std::sin(a);
  EXPECT_NEAR(dephasing_disturbance(BipartiteState::pure(psi, {2, 2})), 0.5 * std::sin(2.0 * a), 1e-14);
}

TEST(DephasingDisturbance, ZeroForClassicalQuantumStates) {
  std::mt19937_64 rng(25);
  const ProjectiveBasis basis(haar_unitary(3, rng));
  const std::array<double, 3> p{0.5, 0.3, 0.2};
  const std::array<Matrix, 3> sigma{random_density(2, 2, rng), random_density(2, 1, rng),
                                    random_density(2, 2, rng)};
  EXPECT_LT(dephasing_disturbance(zero_discord_state(p, basis, sigma)), 1e-12);
}

TEST(DephasingDisturbance, MatchesDefinitionAndRejectsDegenerate) {
  std::mt19937_64 rng(26);
  const BipartiteState s(random_density(6, 6, rng), {2, 3});
  EXPECT_NEAR(dephasing_disturbance(s), oracle_basis_distance(s, local_eigenbasis(s).basis), 1e-12);
  EXPECT_THROW((void)dephasing_disturbance(bell_state()), DegenerateMarginalError);
}

TEST(BasisGrid, PointCountAndSpecialBases) {
  const BasisGrid grid;
  const auto pts = grid.points();
  EXPECT_EQ(pts.size(), std::size_t{1 + 58 * 120 + 60});
  bool has_y = false;
  for (const auto& p : pts) {
    EXPECT_LE(p.theta, 0.5 * std::numbers::pi + 1e-15);
    has_y = has_y || (std::abs(p.theta - 0.5 * std::numbers::pi) < 1e-15 &&
                      std::abs(p.phi - 0.5 * std::numbers::pi) < 1e-15);
  }
  EXPECT_TRUE(has_y);
  EXPECT_THROW((void)(BasisGrid{1, 10}.points()), ContractError);
}

TEST(CanonicalBloch, SameBasis) {
  for (auto [theta, phi] : {std::pair{2.5, 0.7}, {-0.4, 5.0}, {4.0, -1.0}, {0.2, 7.0}}) {
    const auto c = canonical_bloch(theta, phi);
    EXPECT_GE(c.theta, 0.0);
    EXPECT_LE(c.theta, 0.5 * std::numbers::pi);
    EXPECT_GE(c.phi, 0.0);
    EXPECT_LT(c.phi, 2.0 * std::numbers::pi);
    // The same projector pair, possibly with the two vectors swapped.
    const Matrix p = ProjectiveBasis::bloch(theta, phi).projector(0);
    const auto q = ProjectiveBasis::bloch(c.theta, c.phi);
    EXPECT_LT(std::min((p - q.projector(0)).norm(), (p - q.projector(1)).norm()), 1e-14);
  }
}

TEST(MinimizeOverBases, FindsSmoothMinimum) {
  // Squared chord distance to a direction off the grid.
  const double t0 = 0.7123;
  const double p0 = 2.0417;
  auto f = [&](double theta, double phi) {
    const double c = std::sin(theta) * std::sin(t0) * std::cos(phi - p0) + std::cos(theta) * std::cos(t0);
    return 1.0 - c * c;
  };
  const auto best = minimize_over_bases(BasisGrid{}, f);
  EXPECT_LT(best.value, 1e-5);
  EXPECT_NEAR(best.point.theta, t0, 3e-3);
}

TEST(MinimalDisturbance, FastPathMatchesDefinition) {
  std::mt19937_64 rng(27);
  for (int db : {1, 2, 3, 5}) {
    for (int rank : {1, 2, 2 * db}) {
      if (rank > 2 * db) continue;
      const BipartiteState s(random_density(2 * db, rank, rng), {2, db});
      const auto m = minimal_dephasing_disturbance(s, BasisGrid{12, 24});
      EXPECT_NEAR(m.value, oracle_basis_distance(s, m.basis), 1e-10) << "d_B=" << db << " rank=" << rank;
    }
  }
}

TEST(MinimalDisturbance, BoundedByEigenbasisValueAndCoarseSearch) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 5; ++trial) {
    const BipartiteState s(random_density(6, 3, rng), {2, 3});
    const auto m = minimal_dephasing_disturbance(s);
    EXPECT_LE(m.value, dephasing_disturbance(s) + 1e-12);
    double coarse = INFINITY;
    for (const auto& p : BasisGrid{10, 20}.points()) {
      coarse = std::min(coarse, oracle_basis_distance(s, ProjectiveBasis::bloch(p.theta, p.phi)));
    }
    EXPECT_LE(m.value, coarse + 1e-10);
  }
}

TEST(MinimalDisturbance, Examples) {
  // Bell state: every basis gives 1/2.
  EXPECT_NEAR(minimal_dephasing_disturbance(bell_state()).value, 0.5, 1e-10);
  // Classical in the y basis, which lies on the grid.
  const auto y = ProjectiveBasis::bloch(0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  std::mt19937_64 rng(29);
  const std::array<double, 2> p{0.5, 0.5};
  const std::array<Matrix, 2> sigma{random_density(3, 2, rng), random_density(3, 2, rng)};
  EXPECT_LT(minimal_dephasing_disturbance(zero_discord_state(p, y, sigma)).value, 1e-12);
  EXPECT_THROW((void)minimal_dephasing_disturbance(BipartiteState(Matrix::Identity(6, 6) / 6.0, {3, 2})),
               UnsupportedError);
}

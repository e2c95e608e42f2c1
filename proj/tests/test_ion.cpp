#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

using namespace discord;
using namespace testing_support;

TEST(Ion, HamiltonianElements) {
  ion::IonParams p;
  p.n_max = 4;
  const Matrix h = ion::build_hamiltonian(p);
  ASSERT_EQ(h.rows(), 10);
  EXPECT_TRUE(is_hermitian(h));
  for (int n = 0; n < 4; ++n) {
    // <e, n+1| H |g, n> = Omega_n / 2 = sqrt(n + 1) eta Omega / 2.
    EXPECT_NEAR(h(5 + n + 1, n).real(), 0.5 * std::sqrt(n + 1.0) * p.eta * p.omega, 1e-15);
  }
  // |g, n_max> has no partner and |e, 0> is never reached.
  EXPECT_EQ(h.col(4).norm(), 0.0);
  EXPECT_EQ(h.col(5).norm(), 0.0);
  EXPECT_NEAR(h.cwiseAbs().sum(), 2.0 * 0.5 * p.eta * (1.0 + std::sqrt(2.0) + std::sqrt(3.0) + 2.0), 1e-14);
}

TEST(Ion, ConservesExcitationNumber) {
  ion::IonParams p;
  p.n_max = 6;
  const Matrix h = ion::build_hamiltonian(p);
  Matrix k = Matrix::Zero(14, 14);
  for (int n = 0; n < 7; ++n) {
    k(n, n) = n;
    k(7 + n, 7 + n) = n - 1;
  }
  EXPECT_LT((h * k - k * h).norm(), 1e-15);
}

TEST(Ion, LaguerreFormApproachesLambDicke) {
  ion::IonParams ld;
  ld.eta = 0.01;
  ion::IonParams full = ld;
  full.lamb_dicke_limit = false;
  for (int n = 0; n <= 10; ++n) {
    const double a = ion::rabi_frequency(ld, n);
    EXPECT_LT(std::abs(ion::rabi_frequency(full, n) - a) / a, 1e-3) << n;
  }
  // L_0^1 = 1.
  EXPECT_NEAR(ion::rabi_frequency(full, 0), 0.01 * std::exp(-1e-4), 1e-16);
}

TEST(Ion, PreparedStateMatchesClosedForm) {
  ion::IonParams p;
  p.nbar = 0.7;
  const double t0 = 13.0;
  const auto s = ion::prepare_state(p, t0);
  const auto d_b = ion::cutoff(p) + 1;
  const auto pops = thermal_populations(p.nbar, d_b - 1);
  Matrix expected = Matrix::Zero(2 * d_b, 2 * d_b);
  const Complex i(0.0, 1.0);
  for (Eigen::Index n = 0; n < d_b; ++n) {
    const double pn = pops[static_cast<std::size_t>(n)];
    if (n + 1 == d_b) {
      expected(n, n) += pn;  // uncoupled top level
      continue;
    }
    const double half = 0.5 * ion::rabi_frequency(p, n) * t0;
    const double c = std::cos(half);
    const double sn = std::sin(half);
    const Eigen::Index g = n;
    const Eigen::Index e = d_b + n + 1;
    expected(g, g) += pn * c * c;
    expected(e, e) += pn * sn * sn;
    expected(g, e) += pn * i * c * sn;
    expected(e, g) += -pn * i * c * sn;
  }
  EXPECT_LT((s.rho() - expected).cwiseAbs().maxCoeff(), 1e-13);
  // The closed form also drives the top level, which the truncated state leaves
  // uncoupled; the difference is bounded by the cutoff tail weight.
  EXPECT_NEAR(s.marginal_a()(1, 1).real(), ion::excited_population(p, t0), 1e-8);
}

TEST(Ion, QuarterPeriodSignalIsHalf) {
  ion::IonParams p;
  const double t = ion::quarter_period(p);
  EXPECT_NEAR(ion::analytic_local_distance(p, t, t), 0.5, 1e-12);
  const auto evo = ion::evolution(p);
  const auto series = ion::simulate_detection(p, evo, t, TimeGrid({0.0, t}));
  EXPECT_NEAR(series.d_t[1], 0.5, 1e-9);
  EXPECT_NEAR(*series.bound_ref, 0.5, 1e-9);
  EXPECT_TRUE(series.sound());
}

TEST(Ion, SimulationMatchesAnalyticFormula) {
  for (double nbar : {0.2, 1.5}) {
    ion::IonParams p;
    p.nbar = nbar;
    const auto evo = ion::evolution(p);
    const double q = ion::quarter_period(p);
    const auto grid = TimeGrid::uniform(3.0 * q, 13);
    for (double t0 : {0.4 * q, 1.3 * q, 2.9 * q}) {
      const auto series = ion::simulate_detection(p, evo, t0, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(series.d_t[i], ion::analytic_local_distance(p, t0, grid[i]), 1e-9);
      }
      EXPECT_NEAR(*series.bound_ref, ion::analytic_disturbance(p, t0), 1e-9);
      EXPECT_TRUE(series.sound());
    }
  }
}

TEST(Ion, SignalPlateausNearQuarter) {
  ion::IonParams p;
  const auto points = ion::signal_vs_temperature(p, {0.0, 5.0, 10.0, 20.0, 40.0});
  EXPECT_NEAR(points[0].signal, 0.5, 1e-12);
  for (std::size_t i = 1; i < points.size(); ++i) {
    EXPECT_GE(points[i].signal, 0.2);
    EXPECT_LE(points[i].signal, 0.3);
    EXPECT_LE(points[i].signal, points[i - 1].signal + 1e-12);
  }
}

TEST(Ion, Validation) {
  ion::IonParams p;
  p.eta = 0.0;
  EXPECT_THROW((void)ion::build_hamiltonian(p), ContractError);
  p.eta = 0.05;
  p.nbar = -1.0;
  EXPECT_THROW((void)ion::analytic_disturbance(p, 1.0), ContractError);
  p.nbar = 0.0;
  EXPECT_THROW((void)ion::prepare_state(p, -1.0), ContractError);
}

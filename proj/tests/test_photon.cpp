#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

using namespace discord;
using namespace testing_support;

namespace {

// beta [2/pi - (4/pi) sum_k e^{-2 k dw t} / (4k^2 - 1)]: the Lorentzian average
// of |sin(x t)| from its Fourier series.
double series_disturbance(double beta, double dwt) {
  double sum = 0.0;
  for (int k = 1; k < 20000; ++k) sum += std::exp(-2.0 * k * dwt) / (4.0 * k * k - 1.0);
  return beta * (2.0 / std::numbers::pi - 4.0 / std::numbers::pi * sum);
}

photon::PhotonParams small_params(double t_prep) {
  photon::PhotonParams p;
  p.t_prep = t_prep;
  p.span = 100.0;
  p.points = 801;  // spacing 0.25 keeps the grid recurrence beyond 3 t_prep
  return p;
}

WitnessSeries cv_series(const photon::PhotonParams& p, double eta_angle, const TimeGrid& grid) {
  const auto state = photon::build_correlated_state(p);
  return run_local_detection(state, photon::michelson_propagator(p, eta_angle), grid);
}

}  // namespace

TEST(PhotonCv, FrequencyGridIsNormalized) {
  const auto g = photon::frequency_grid(photon::PhotonParams{});
  double total = 0.0;
  for (double w : g.weight) total += w;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(g.omega.front(), 10.0 - 300.0, 1e-12);
  EXPECT_NEAR(g.omega[750], 10.0, 1e-12);
}

TEST(PhotonCv, CoherenceApproachesExponential) {
  const photon::PhotonParams p;
  EXPECT_NEAR(std::abs(photon::coherence_function(p, 0.0)), 1.0, 1e-14);
  for (double t : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(photon::coherence_function(p, t).real(), std::exp(-t), 5e-3);
    EXPECT_NEAR(photon::coherence_function(p, t).imag(), 0.0, 1e-12);
  }
}

TEST(PhotonCv, StateMarginals) {
  const auto p = small_params(1.0);
  const auto s = photon::build_correlated_state(p);
  const Matrix rho_a = s.marginal_a();
  EXPECT_NEAR(rho_a(0, 0).real(), 0.5, 1e-14);
  const Complex c = photon::coherence_function(p, p.t_prep);
  EXPECT_LT(std::abs(rho_a(0, 1) - p.beta * c), 1e-14);
  // Every frequency block is a valid 2x2 state for beta <= 1/2.
  const BipartiteState checked(s.rho(), s.dims());
  EXPECT_NEAR(checked.rho().trace().real(), 1.0, 1e-13);
}

TEST(PhotonCv, SeriesTracksClosedForm) {
  for (double t : {0.5, 1.0, 2.0}) {
    const auto p = small_params(t);
    const auto grid = TimeGrid::uniform(3.0 * t, 61);
    const auto s = cv_series(p, 0.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(s.d_t[i], photon::analytic_local_distance(p, grid[i]), 2e-3);
    }
    EXPECT_NEAR(s.d_max, photon::analytic_peak_distance(p), 2e-3);
    EXPECT_TRUE(s.sound());
  }
}

TEST(PhotonCv, WitnessIndependentOfPlateAngle) {
  const auto p = small_params(1.0);
  const auto grid = TimeGrid::uniform(3.0, 31);
  const auto a = cv_series(p, 0.0, grid);
  const auto b = cv_series(p, 0.37, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(a.d_t[i], b.d_t[i], 1e-12);
}

TEST(PhotonCv, ConvergesWithGridRefinement) {
  const auto grid = TimeGrid::uniform(3.0, 31);
  auto coarse = small_params(1.0);
  auto fine = coarse;
  fine.points = 1601;
  auto wide = coarse;
  wide.span = 200.0;
  wide.points = 1601;
  const auto a = cv_series(coarse, 0.0, grid);
  const auto b = cv_series(fine, 0.0, grid);
  const auto c = cv_series(wide, 0.0, grid);
  const double target = photon::analytic_peak_distance(coarse);
  EXPECT_LT(std::abs(b.d_max - target), 1e-3);
  EXPECT_LT(std::abs(c.d_max - target), std::abs(a.d_max - target) + 1e-12);
}

TEST(PhotonCv, AnalyticDisturbanceMatchesSeries) {
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    photon::PhotonParams p;
    p.t_prep = t;
    EXPECT_NEAR(photon::analytic_disturbance(p), series_disturbance(p.beta, t), 1e-7) << t;
    EXPECT_GE(photon::analytic_disturbance(p), photon::analytic_peak_distance(p));
  }
  photon::PhotonParams zero;
  zero.t_prep = 0.0;
  EXPECT_EQ(photon::analytic_disturbance(zero), 0.0);
}

TEST(PhotonCv, Validation) {
  photon::PhotonParams p;
  p.beta = 0.6;
  EXPECT_THROW((void)photon::frequency_grid(p), ContractError);
  p.beta = 0.4;
  p.points = 400;
  EXPECT_THROW((void)photon::frequency_grid(p), ContractError);
}

TEST(PhotonDv, StateAndGenerator) {
  const auto s = photon::build_discrete_state({0.5, std::numbers::pi / 4});
  EXPECT_NEAR(s.rho().trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(s.rho()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(s.rho()(1, 3).real(), 0.25, 1e-15);
  EXPECT_THROW((void)photon::build_discrete_state({1.5, 0.0}), ContractError);
  EXPECT_EQ(photon::discrete_phase_generator()(3, 3), Complex(1.0));
  EXPECT_TRUE(is_unitary(photon::discrete_perturbation()));
}

TEST(PhotonDv, TwoStepProtocol) {
  const auto evo = EvolutionSpec::generator(photon::discrete_phase_generator());
  const auto grid = TimeGrid::uniform(2.0 * std::numbers::pi, 100);
  const BasisGrid bases{30, 60};
  // Discordant: witnessed directly.
  const auto discordant = photon::build_discrete_state({0.5, std::numbers::pi / 4});
  const auto a = run_minimized_detection(discordant, evo, grid, bases);
  EXPECT_GT(a.d_max, 1e-3);
  EXPECT_TRUE(a.sound());
  // Orthogonal polarizations: classical, but correlated.
  const auto classical = photon::build_discrete_state({0.5, std::numbers::pi / 2});
  const auto b = run_minimized_detection(classical, evo, grid, bases);
  EXPECT_LE(b.d_max, 1e-6);
  EXPECT_TRUE(classical_correlation_witness(classical, photon::discrete_perturbation(), evo, grid).detected);
  // Product.
  const auto product = photon::build_discrete_state({1.0, 0.0});
  EXPECT_LE(run_minimized_detection(product, evo, grid, bases).d_max, 1e-6);
  EXPECT_FALSE(classical_correlation_witness(product, photon::discrete_perturbation(), evo, grid).detected);
}

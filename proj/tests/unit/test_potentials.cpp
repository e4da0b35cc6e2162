#include <gtest/gtest.h>

#include <cmath>

#include "dyson/errors.hpp"
#include "dyson/potentials.hpp"

using namespace dyson;

TEST(Potentials, LogGasValueAndGradient) {
  const auto psi = PairPotential::log_gas(2.0);
  EXPECT_NEAR(psi.value(Point(1.0), Point(3.0)), -2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(psi.gradient(Point(1.0), Point(3.0)).x(), 1.0, 1e-15);  // -beta/(x-y)
  EXPECT_TRUE(std::isinf(psi.value(Point(1.0), Point(1.0))));
  EXPECT_DOUBLE_EQ(psi.log_gas_beta(), 2.0);
  EXPECT_THROW(PairPotential::zero().log_gas_beta(), DomainError);
  EXPECT_THROW(PairPotential::log_gas(-1.0), DomainError);
}

TEST(Potentials, HamiltonianCountsOnlyWindow) {
  const auto xi = Configuration::from_1d(std::vector<double>{-0.5, 0.5, 1.5});
  const auto phi = FreePotential::quadratic(1.0);
  const auto psi = PairPotential::log_gas(2.0);
  // r = 1: only -0.5 and 0.5
  EXPECT_NEAR(hamiltonian(xi, 1, phi, psi), 0.5, 1e-15);
  // r = 2 adds 1.5: Phi = 2.25, pairs with distances 2 and 1
  EXPECT_NEAR(hamiltonian(xi, 2, phi, psi), 0.5 + 2.25 - 2.0 * std::log(2.0), 1e-14);
  const WindowSchedule sched({3, 5});
  EXPECT_DOUBLE_EQ(sched.radius(2), 5.0);
  EXPECT_THROW(WindowSchedule({2, 2}), DomainError);
  EXPECT_THROW(sched.radius(3), DomainError);
}

TEST(Potentials, GibbsDensityAndDrift) {
  const std::vector<double> x{-1.0, 0.5, 2.0};
  const double beta = 2.0;
  const double expected = beta * (std::log(1.5) + std::log(3.0) + std::log(1.5)) - beta / 12.0 * (1.0 + 0.25 + 4.0);
  EXPECT_NEAR(gibbs_log_density(x, beta, 3), expected, 1e-14);
  const auto d = gibbs_drift(x, beta, 3, DysonModel::plain);
  EXPECT_NEAR(d[0], (1.0 / -1.5 + 1.0 / -3.0), 1e-15);
  const auto ou = gibbs_drift(x, beta, 3, DysonModel::ou);
  EXPECT_NEAR(ou[2] - d[2], -beta / 12.0 * 2.0, 1e-15);
  EXPECT_TRUE(std::isinf(gibbs_log_density(std::vector<double>{1.0, 1.0}, 2.0, 2)));
  EXPECT_THROW(gibbs_drift(std::vector<double>{1.0, 1.0}, 2.0, 2, DysonModel::plain), CollisionError);
  EXPECT_THROW(gibbs_log_density(x, 2.0, 4), DomainError);
}

TEST(Potentials, CrossInteraction) {
  const auto eta = Configuration::from_1d(std::vector<double>{0.0});
  const auto out = Configuration::from_1d(std::vector<double>{2.0, -4.0});
  EXPECT_NEAR(cross_interaction(eta, out, PairPotential::log_gas(1.0)), -std::log(8.0), 1e-15);
}

TEST(Sandwich, FreeGasRatioIsConstant) {
  SandwichConfig cfg;
  cfg.interaction_scale = 0.0;
  cfg.trials = 4;
  const auto rep = quasi_gibbs_sandwich_check(cfg);
  EXPECT_NEAR(rep.ratio_max / rep.ratio_min, 1.0, 1e-12);
}

TEST(Sandwich, LogGasRatioBounded) {
  SandwichConfig cfg;
  cfg.trials = 4;
  const auto rep = quasi_gibbs_sandwich_check(cfg);
  EXPECT_GT(rep.ratio_min, 0.0);
  EXPECT_LE(rep.ratio_min, rep.ratio_max);
  EXPECT_TRUE(std::isfinite(rep.ratio_max));
  ASSERT_EQ(rep.trials.size(), 4u);
  for (const auto& t : rep.trials) EXPECT_EQ(t.outside.size(), cfg.n - cfg.m);
  EXPECT_EQ(to_json(rep)["trials"].size(), 4u);
}

TEST(Sandwich, LimitsEnforced) {
  SandwichConfig cfg;
  cfg.m = 5;
  cfg.n = 6;
  EXPECT_THROW(quasi_gibbs_sandwich_check(cfg), DomainError);
  cfg.m = 2;
  cfg.n = 13;
  EXPECT_THROW(quasi_gibbs_sandwich_check(cfg), DomainError);
}

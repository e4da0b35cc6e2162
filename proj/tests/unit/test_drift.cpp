#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dyson/drift.hpp"
#include "dyson/errors.hpp"

using namespace dyson;
using std::numbers::pi;

namespace {

LabeledState lattice(double r) {
  std::vector<double> xs;
  for (double x = -std::floor(r); x <= r; x += 1.0) xs.push_back(x);
  return LabeledState::increasing(xs, r + 1.0);
}

}  // namespace

TEST(Drift, BulkSymmetricLatticeCentreIsZero) {
  const auto x = lattice(10.0);
  EXPECT_NEAR(bulk_drift(10, x, 10.5, 2.0), 0.0, 1e-14);
  // x = 1: pairs around it cancel except -9 and -10
  EXPECT_NEAR(bulk_drift(11, x, 10.5, 2.0), 1.0 / 10.0 + 1.0 / 11.0, 1e-14);
}

TEST(Drift, BulkTruncationIgnoresFarPoints) {
  const auto x = LabeledState::increasing({-8.0, 0.0, 1.0}, 10.0);
  EXPECT_NEAR(bulk_drift(1, x, 5.0, 2.0), -1.0, 1e-15);
  EXPECT_NEAR(bulk_drift(1, x, 9.0, 2.0), -1.0 + 1.0 / 8.0, 1e-15);
  EXPECT_THROW(bulk_drift(1, x, 11.0, 2.0), DomainError);
}

TEST(Drift, CompensatorClosedFormMatchesQuadrature) {
  for (double r : {0.1, 1.0, 10.0, 100.0}) {
    EXPECT_NEAR(soft_edge_compensator(r), 2.0 * std::sqrt(r) / pi, 1e-15);
    EXPECT_NEAR(soft_edge_compensator_quadrature(r), soft_edge_compensator(r), 1e-10);
  }
}

TEST(Drift, SoftEdgeSubtractsCompensator) {
  const auto x = LabeledState::increasing({-3.0, -1.0}, 4.0);
  EXPECT_NEAR(soft_edge_drift(1, x, 4.0, 2.0), 0.5 - 4.0 / pi, 1e-15);
}

TEST(Drift, BesselAddsRepulsionFromOrigin) {
  const auto x = LabeledState::increasing({1.0, 2.0}, 10.0);
  EXPECT_NEAR(bessel_drift(0, x, 3.0, 10.0), 1.5 - 1.0, 1e-15);
  EXPECT_THROW(validate(BesselModel{0.5, 10.0}), DomainError);
}

TEST(Drift, GinibrePairTerm) {
  const LabeledState x({0.0, 0.0, 2.0, 0.0}, 2, LabelOrder::tracked, 5.0);
  const auto p = ginibre_drift(0, x, 5.0);
  EXPECT_NEAR(p.x(), -0.5, 1e-15);
  EXPECT_NEAR(p.y(), 0.0, 1e-15);
  const auto q = ginibre_drift(1, x, 5.0);
  EXPECT_NEAR(q.x(), -2.0 + 0.5, 1e-15);
}

TEST(Drift, FrozenEnvironment) {
  const auto env = Configuration::from_1d(std::vector<double>{2.0});
  const FrozenEnvModel m{1, env, FreePotential::quadratic(1.0), PairPotential::log_gas(2.0)};
  const auto d = drift_vector(m, LabeledState::increasing({0.0}));
  // -Phi'(0)/2 - Psi'(0, 2)/2 = 0 - (-2/(0 - 2))/2
  EXPECT_NEAR(d[0], -0.5, 1e-15);
}

TEST(Drift, FiniteNMatchesGibbs) {
  const auto x = LabeledState::increasing({-1.0, 0.5, 2.0});
  const auto a = drift_vector(FiniteNModel{2.0, 3, DysonModel::ou}, x);
  const auto b = gibbs_drift(x, 2.0, 3, DysonModel::ou);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(a[i], b[i]);
  EXPECT_THROW(validate(FiniteNModel{2.0, 0, DysonModel::plain}), DomainError);
  EXPECT_THROW(validate(BulkModel{-1.0, 1.0}), DomainError);
}

TEST(Drift, ConvergenceDiagnosticOnLattice) {
  const auto x = lattice(40.0);
  const std::vector<double> radii{5.5, 10.5, 20.5, 40.5};
  const auto diag = drift_convergence_diag(41, x, radii, BulkModel{2.0, 40.5});
  ASSERT_EQ(diag.values.size(), 4u);
  EXPECT_TRUE(std::isnan(diag.diffs[0]));
  // one unpaired point near the cutoff: diffs shrink like 1/r
  EXPECT_LT(diag.diffs[3], diag.diffs[1]);
  EXPECT_NE(to_csv(diag).find("radius"), std::string::npos);
}

TEST(Drift, CollisionRaises) {
  const auto x = LabeledState::increasing({0.0, 1e-13});
  EXPECT_THROW(drift_vector(FiniteNModel{2.0, 2, DysonModel::plain}, x), CollisionError);
}

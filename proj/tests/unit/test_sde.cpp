#include <gtest/gtest.h>

#include <cmath>

#include "dyson/errors.hpp"
#include "dyson/sampling.hpp"
#include "dyson/sde.hpp"

using namespace dyson;

namespace {

LabeledState spaced(std::size_t n) {
  std::vector<double> xs;
  for (std::size_t j = 0; j < n; ++j) xs.push_back(static_cast<double>(j));
  return LabeledState::increasing(xs);
}

}  // namespace

TEST(Sde, SeededPathsAreReproducible) {
  IntegratorConfig cfg;
  cfg.horizon = 0.2;
  cfg.record_stride = 10;
  const DriftModel m = FiniteNModel{1.0, 6, DysonModel::plain};
  const auto a = integrate(spaced(6), m, cfg, 3);
  const auto b = integrate(spaced(6), m, cfg, 3);
  const auto c = integrate(spaced(6), m, cfg, 4);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_NE(to_csv(a), to_csv(c));
  EXPECT_EQ(a.seed, stream_seed(cfg.seed, 3));
}

TEST(Sde, RecordsTimesAndStaysOrdered) {
  IntegratorConfig cfg;
  cfg.horizon = 0.5;
  cfg.record_stride = 50;
  const auto p = integrate(spaced(8), FiniteNModel{1.0, 8, DysonModel::plain}, cfg);
  ASSERT_EQ(p.times.size(), 11u);
  EXPECT_DOUBLE_EQ(p.times.back(), 0.5);
  for (const auto& s : p.states) {
    for (std::size_t j = 0; j + 1 < s.size(); ++j) EXPECT_LT(s[j], s[j + 1]);
  }
  EXPECT_GT(p.diagnostics.min_gap, 0.0);
  EXPECT_EQ(p.diagnostics.substep_histogram.size(), 41u);
}

TEST(Sde, NoiseOnlyVarianceMatchesTime) {
  // one particle, zero drift: X_T - X_0 ~ N(0, T)
  IntegratorConfig cfg;
  cfg.horizon = 1.0;
  cfg.dt = 0.05;
  const DriftModel m = FiniteNModel{2.0, 1, DysonModel::plain};
  const auto x0 = LabeledState::increasing({0.0});
  double s2 = 0.0;
  const int paths = 4000;
  for (int i = 0; i < paths; ++i) {
    const double v = integrate(x0, m, cfg, static_cast<std::uint64_t>(i)).states.back()[0];
    s2 += v * v;
  }
  EXPECT_NEAR(s2 / paths, 1.0, 5.0 * std::sqrt(2.0 / paths));
}

TEST(Sde, BesselStaysPositiveAndGinibreTracks) {
  IntegratorConfig cfg;
  cfg.horizon = 0.2;
  cfg.record_stride = 20;
  const auto xb = LabeledState::increasing({0.5, 2.0, 5.0}, 10.0);
  const auto pb = integrate(xb, BesselModel{1.0, 10.0}, cfg);
  for (const auto& s : pb.states) EXPECT_GT(s[0], 0.0);

  const LabeledState xg({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, 2, LabelOrder::tracked, 5.0);
  const auto pg = integrate(xg, GinibreModel{5.0}, cfg);
  EXPECT_EQ(pg.states.back().dim(), 2);
  EXPECT_NE(to_csv(pg).find("t,x1,y1,x2,y2"), std::string::npos);
}

TEST(Sde, StepControlGivesUpWithoutHalvings) {
  IntegratorConfig cfg;
  cfg.dt = 0.5;
  cfg.horizon = 0.5;
  cfg.max_halvings = 0;
  const auto x0 = LabeledState::increasing({0.0, 0.01});
  try {
    integrate(x0, FiniteNModel{4.0, 2, DysonModel::plain}, cfg);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.state().size(), 2u);
    EXPECT_DOUBLE_EQ(e.time(), 0.0);
  }
}

TEST(Sde, InvalidInputs) {
  IntegratorConfig cfg;
  cfg.dt = -1.0;
  EXPECT_THROW(validate(cfg), DomainError);
  cfg = {};
  EXPECT_THROW(integrate(LabeledState::increasing({0.0, 1.0}), FiniteNModel{2.0, 3, DysonModel::plain}, cfg),
               DomainError);
}

TEST(Sde, EdgeRescaleRoundTrip) {
  const auto x = LabeledState::increasing({10.0, 19.0, 20.5});
  const auto y = edge_rescale(x, 100);
  EXPECT_NEAR(y[2], std::pow(100.0, 1.0 / 6.0) * 0.5, 1e-12);
  const auto back = edge_unscale(y, 100);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(back[j], x[j], 1e-12);
}

TEST(Sde, StationarityWithZeroHorizonIsExact) {
  McmcConfig m;
  m.steps = 4000;
  m.thinning = 20;
  const auto ref = mcmc_gibbs(4, 2.0, m).samples;
  IntegratorConfig cfg;
  cfg.horizon = 0.0;
  const auto rep = stationarity_run(4, 2.0, cfg, ref);
  for (const auto& s : rep.stats) EXPECT_DOUBLE_EQ(s.z, 0.0) << s.name;
}

TEST(Sde, TwoParticleGapStaysPositive) {
  IntegratorConfig cfg;
  cfg.record_stride = 50;
  const DriftModel m = FiniteNModel{2.0, 2, DysonModel::plain};
  const auto x0 = LabeledState::increasing({-1.0, 1.0});
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    cfg.seed = seed;
    const auto p = integrate(x0, m, cfg);
    for (const auto& s : p.states) ASSERT_GT(s[1] - s[0], 0.0) << "seed " << seed;
  }
}

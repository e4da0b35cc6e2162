#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"
#include "dyson/sampling.hpp"
#include "dyson/stats.hpp"

using namespace dyson;
using std::numbers::pi;

TEST(Stats, ErfTail) {
  EXPECT_DOUBLE_EQ(erf_tail(0.0), 0.5);
  EXPECT_NEAR(erf_tail(1.0), 0.15865525393145705, 1e-16);
  EXPECT_NEAR(erf_tail(-1.0), 1.0 - 0.15865525393145705, 1e-15);
}

TEST(Stats, WignerSurmiseIsNormalizedWithUnitMean) {
  const auto z = integrate_adaptive(wigner_surmise_beta2_pdf, 0.0, 20.0);
  EXPECT_NEAR(z.value, 1.0, 1e-12);
  const auto m = integrate_adaptive([](double s) { return s * wigner_surmise_beta2_pdf(s); }, 0.0, 20.0);
  EXPECT_NEAR(m.value, 1.0, 1e-12);
  for (double s : {0.2, 0.9, 2.0}) {
    EXPECT_NEAR(wigner_surmise_beta2_cdf(s), integrate_adaptive(wigner_surmise_beta2_pdf, 0.0, s).value, 1e-13);
  }
}

TEST(Stats, SemicircleCdf) {
  EXPECT_DOUBLE_EQ(semicircle_cdf(-3.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(semicircle_cdf(3.0, 2.0), 1.0);
  EXPECT_NEAR(semicircle_cdf(0.0, 2.0), 0.5, 1e-15);
  const auto q = integrate_adaptive([](double x) { return std::sqrt(4.0 - x * x) / (2.0 * pi); }, -2.0, 1.0);
  EXPECT_NEAR(semicircle_cdf(1.0, 2.0), q.value, 1e-10);
}

TEST(Stats, KsDistance) {
  EXPECT_NEAR(ks_distance({0.5}, [](double x) { return x; }), 0.5, 1e-15);
  EXPECT_NEAR(ks_distance({0.25, 0.75}, [](double x) { return x; }), 0.25, 1e-15);
}

TEST(Audits, A2ClosedFormForConstantDensity) {
  const Density rho = [](double) { return 1.0 / pi; };
  const std::vector<double> grid{1.0, 3.0, 10.0};
  const auto rep = audit_A2(rho, 1.0, 1.0, grid);
  ASSERT_EQ(rep.rows.size(), 3u);
  for (const auto& row : rep.rows) {
    EXPECT_NEAR(row.value, erf_tail(row.r / (row.r + 1.0)) * 2.0 * (row.r + 1.0) / pi, 1e-10);
  }
  EXPECT_TRUE(rep.nondecreasing);
  EXPECT_NE(to_csv(rep).find("r,"), std::string::npos);
  EXPECT_EQ(to_json(rep)["kind"], "A2");
}

TEST(Audits, A5ConvergesForConstantDensity) {
  const Density rho = [](double) { return 1.0 / pi; };
  const auto a = audit_A5(rho, 1.0, 1.0, 1.0);
  const auto b = audit_A5(rho, 1.0, 1.0, 1.0, 2.0);
  EXPECT_FALSE(a.divergent);
  EXPECT_NEAR(a.value, b.value, 1e-12);
  // (2/pi) int_{-1}^inf tail(u) du = (2/pi)(1 - tail(1) + phi(1))
  const double phi1 = std::exp(-0.5) / std::sqrt(2.0 * pi);
  EXPECT_NEAR(a.value, 2.0 / pi * (1.0 - erf_tail(1.0) + phi1), 1e-10);
}

TEST(Correlation, PoissonIntensityRecovered) {
  Rng rng = make_rng(9, 0);
  std::vector<Configuration> s;
  for (int i = 0; i < 4000; ++i) s.push_back(poisson_sample(2.0, 0.0, 5.0, rng));
  const auto r1 = empirical_correlation(s, 1, {0.0, 5.0, 5});
  const auto r2 = empirical_correlation(s, 2, {0.0, 5.0, 5});
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r1.value[i], 2.0, 5.0 * r1.stderr_[i]);
  for (std::size_t c = 0; c < 25; ++c) EXPECT_NEAR(r2.value[c], 4.0, 5.0 * r2.stderr_[c]);
  std::vector<Configuration> few(s.begin(), s.begin() + 50);
  EXPECT_THROW(empirical_correlation(few, 1, {0.0, 5.0, 5}), DomainError);
}

TEST(Spacing, GueSpacingsFollowSurmise) {
  const auto samples = tridiag_beta_ensemble(100, 2.0, 200, 4, BetaScaling::hermite);
  const auto [lo, hi] = central_window(samples, 0.5);
  const auto sp = spacing_distribution(samples, lo, hi, wigner_surmise_beta2_cdf);
  double mean = 0.0;
  for (double v : sp.spacings) mean += v;
  EXPECT_NEAR(mean / static_cast<double>(sp.spacings.size()), 1.0, 1e-12);
  EXPECT_LT(sp.ks, 0.05);
  EXPECT_EQ(sp.histogram.size(), 40u);
  EXPECT_GT(semicircle_compare(samples, 100), 0.0);
  EXPECT_LT(semicircle_compare(samples, 100), 0.03);
}

TEST(Spacing, LatticeIsDegenerate) {
  std::vector<LabeledState> lattice;
  std::vector<double> x;
  for (int k = 0; k < 200; ++k) x.push_back(k);
  for (int i = 0; i < 10; ++i) lattice.push_back(LabeledState::increasing(x));
  const auto sp = spacing_distribution(lattice, 0.0, 199.0, wigner_surmise_beta2_cdf);
  for (double v : sp.spacings) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_GT(sp.ks, 0.5);
}

TEST(Spacing, UniformPointsGiveExponentialSpacings) {
  Rng rng = make_rng(9, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LabeledState> samples;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> x(501);
    for (double& v : x) v = u(rng);
    std::sort(x.begin(), x.end());
    samples.push_back(LabeledState::increasing(x));
  }
  const auto sp = spacing_distribution(samples, 0.0, 1.0, exponential_cdf);
  EXPECT_GE(sp.spacings.size(), 10000u);
  EXPECT_LT(sp.ks, 0.05);
}

TEST(Semicircle, InverseTransformAndPointMass) {
  Rng rng = make_rng(10, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(100000);
  for (double& v : x) {
    const double target = u(rng);
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid, 2.0) < target ? lo : hi) = mid;
    }
    v = 0.5 * (lo + hi);
  }
  const auto cdf = [](double y) { return semicircle_cdf(y, 2.0); };
  EXPECT_LT(ks_distance(x, cdf), 0.01);
  EXPECT_NEAR(ks_distance(std::vector<double>(1000, 0.0), cdf), 0.5, 1e-12);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dyson/errors.hpp"
#include "dyson/estimate.hpp"
#include "dyson/sampling.hpp"

using namespace dyson;
using std::numbers::pi;

namespace {

std::vector<double> sum_sq(const std::vector<LabeledState>& s) {
  std::vector<double> out;
  for (const auto& x : s) {
    double q = 0.0;
    for (double v : x.coords()) q += v * v;
    out.push_back(q);
  }
  return out;
}

}  // namespace

TEST(Tridiagonal, SecondMomentMatchesExactValue) {
  // gibbs-bulk: 2N^2/beta + N^2 (N - 1); hermite divides by N
  for (double beta : {1.0, 2.0, 4.0}) {
    const auto s = tridiag_beta_ensemble(8, beta, 20000, 11, BetaScaling::gibbs_bulk);
    const auto m = mean_se(sum_sq(s));
    const double exact = 2.0 * 64.0 / beta + 64.0 * 7.0;
    EXPECT_LT(std::abs(m.mean - exact), 4.0 * m.se) << "beta " << beta;
    const auto h = mean_se(sum_sq(tridiag_beta_ensemble(8, beta, 20000, 12, BetaScaling::hermite)));
    EXPECT_LT(std::abs(h.mean - exact / 8.0), 4.0 * h.se) << "beta " << beta;
  }
}

TEST(Tridiagonal, SortedAndReproducible) {
  const auto a = tridiag_beta_sample(30, 2.0, 5);
  const auto b = tridiag_beta_sample(30, 2.0, 5);
  EXPECT_EQ(a, b);
  for (std::size_t j = 0; j + 1 < a.size(); ++j) EXPECT_LT(a[j], a[j + 1]);
  EXPECT_EQ(tridiag_beta_ensemble(30, 2.0, 3, 5, BetaScaling::gibbs_bulk, 1),
            tridiag_beta_ensemble(30, 2.0, 3, 5, BetaScaling::gibbs_bulk, 4));
}

TEST(Mcmc, ReproducibleWithSaneAcceptance) {
  McmcConfig cfg;
  cfg.steps = 6000;
  cfg.log_decisions = true;
  const auto a = mcmc_gibbs(6, 2.0, cfg);
  const auto b = mcmc_gibbs(6, 2.0, cfg);
  ASSERT_EQ(a.samples.size(), 400u);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_GT(a.acceptance_rate, 0.15);
  EXPECT_LT(a.acceptance_rate, 0.6);
  ASSERT_FALSE(a.decisions.empty());
  for (const auto& d : a.decisions) {
    const double delta = d.log_density_proposed - d.log_density_current;
    if (std::abs(d.log_uniform - delta) > 1e-9) EXPECT_EQ(d.accepted, d.log_uniform < delta);
  }
}

TEST(Mcmc, ChainsConcatenateInOrder) {
  McmcConfig cfg;
  cfg.steps = 3000;
  const auto c = mcmc_gibbs_chains(4, 1.0, cfg, 3, 2);
  EXPECT_EQ(c.samples.size(), 300u);
  EXPECT_THROW(mcmc_gibbs(0, 2.0, cfg), DomainError);
}

TEST(Dpp, SineWindowSpectrumAndCount) {
  const DppSampler s(SineKernel{}, DppSampleConfig{});
  EXPECT_NEAR(s.expected_count(), 10.0, 1e-9);
  for (double l : s.spectrum()) {
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
  }
  EXPECT_GT(s.count_variance(), 0.0);
  const auto samples = s.samples(2000);
  double mean = 0.0;
  for (const auto& c : samples) mean += static_cast<double>(c.size());
  mean /= 2000.0;
  EXPECT_NEAR(mean, 10.0, 5.0 * std::sqrt(s.count_variance() / 2000.0));
  // realizations are subsets of the nodes
  for (const auto& p : samples.front().points()) {
    EXPECT_NE(std::find(s.nodes().begin(), s.nodes().end(), p), s.nodes().end());
  }
  EXPECT_TRUE(equivalent(s.sample(std::uint64_t{7}), s.samples(8).back()));
}

TEST(Dpp, GinibreDiskCount) {
  const DppSampler s(GinibreKernel{}, DppSampleConfig{});
  EXPECT_NEAR(s.expected_count(), 9.0, 1e-6);
  const auto c = s.sample(std::uint64_t{0});
  EXPECT_EQ(c.dim(), 2);
}

TEST(Dpp, UnsupportedKernelsAndConfigs) {
  EXPECT_THROW(DppSampler(PearceyKernel{}, DppSampleConfig{}), DomainError);
  DppSampleConfig bad;
  bad.b = bad.a;
  EXPECT_THROW(DppSampler(SineKernel{}, bad), DomainError);
  // 2 * sine kernel has eigenvalues near 2: not a DPP kernel
  auto twice = [](double x, double y) { return 2.0 * sine_kernel(x, y); };
  EXPECT_THROW(DppSampler(twice, DppSampleConfig{}), DiscretizationError);
}

TEST(Poisson, MeanCount) {
  Rng rng = make_rng(3, 0);
  double total = 0.0;
  for (int i = 0; i < 2000; ++i) total += static_cast<double>(poisson_sample(0.5, 0.0, 10.0, rng).size());
  EXPECT_NEAR(total / 2000.0, 5.0, 5.0 * std::sqrt(5.0 / 2000.0));
}

TEST(Mcmc, SingleParticleVariance) {
  McmcConfig cfg;
  cfg.steps = 22000;
  for (double beta : {1.0, 2.0, 4.0}) {
    const auto r = mcmc_gibbs_chains(1, beta, cfg, 5);
    std::vector<double> sq;
    for (const auto& s : r.samples) sq.push_back(s[0] * s[0]);
    const auto m = batch_mean_se(sq, 40);
    EXPECT_LT(std::abs(m.mean - 2.0 / beta), 3.0 * m.se) << "beta " << beta;
  }
}

TEST(Mcmc, TwoParticleGapMatchesRejectionSampler) {
  // N = 2, beta = 2: the gap d has density d^2 e^{-d^2/8}, so E[d^2] = 12.
  // Rejection from N(0, 8) with envelope ratio d^2 e^{-d^2/16} <= 16/e.
  Rng rng = make_rng(41, 0);
  std::normal_distribution<double> g(0.0, std::sqrt(8.0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ref;
  ref.reserve(1000000);
  while (ref.size() < 1000000) {
    const double d = g(rng);
    if (u(rng) * 16.0 / std::exp(1.0) < d * d * std::exp(-d * d / 16.0)) ref.push_back(d * d);
  }
  const auto oracle = mean_se(ref);
  EXPECT_NEAR(oracle.mean, 12.0, 4.0 * oracle.se);

  McmcConfig cfg;
  cfg.steps = 42000;
  cfg.thinning = 5;
  const auto r = mcmc_gibbs_chains(2, 2.0, cfg, 8);
  std::vector<double> gap;
  for (const auto& s : r.samples) gap.push_back((s[1] - s[0]) * (s[1] - s[0]));
  const auto m = batch_mean_se(gap, 40);
  const double se = std::hypot(m.se, oracle.se);
  EXPECT_LT(std::abs(m.mean - oracle.mean), 3.0 * se) << m.mean << " vs " << oracle.mean;
}

TEST(Tridiagonal, SingleParticleMatchesMcmc) {
  const auto t = tridiag_beta_ensemble(1, 2.0, 20000, 13);
  std::vector<double> tq;
  for (const auto& s : t) tq.push_back(s[0] * s[0]);
  const auto a = mean_se(tq);
  McmcConfig cfg;
  cfg.steps = 22000;
  const auto r = mcmc_gibbs_chains(1, 2.0, cfg, 5);
  std::vector<double> mq;
  for (const auto& s : r.samples) mq.push_back(s[0] * s[0]);
  const auto b = batch_mean_se(mq, 40);
  EXPECT_LT(std::abs(a.mean - b.mean), 3.0 * std::hypot(a.se, b.se));
}

TEST(Tridiagonal, LargestEigenvalueSitsBelowTheEdge) {
  const auto s = tridiag_beta_ensemble(50, 2.0, 1000, 14, BetaScaling::hermite);
  std::vector<double> top;
  for (const auto& x : s) top.push_back(x[x.size() - 1]);
  EXPECT_LT(mean_se(top).mean, 2.0 * std::sqrt(50.0));
}

TEST(Dpp, SineCountMeanAndRigidity) {
  const DppSampler s(SineKernel{}, DppSampleConfig{});
  const auto samples = s.samples(10000);
  std::vector<double> counts;
  for (const auto& c : samples) counts.push_back(static_cast<double>(c.size()));
  const auto m = mean_se(counts);
  EXPECT_LT(std::abs(m.mean - 10.0), 3.0 * m.se);

  Rng rng = make_rng(42, 0);
  std::vector<double> pc;
  for (int i = 0; i < 10000; ++i) pc.push_back(static_cast<double>(poisson_sample(1.0 / pi, 0.0, 10.0 * pi, rng).size()));
  auto var = [](const std::vector<double>& v) {
    const double mu = mean_se(v).mean;
    double q = 0.0;
    for (double x : v) q += (x - mu) * (x - mu);
    return q / static_cast<double>(v.size() - 1);
  };
  EXPECT_LT(var(counts), var(pc));
}

TEST(Dpp, ZeroKernelIsEmpty) {
  const DppSampler s([](double, double) { return 0.0; }, DppSampleConfig{});
  EXPECT_EQ(s.expected_count(), 0.0);
  for (const auto& c : s.samples(50)) EXPECT_TRUE(c.empty());
}

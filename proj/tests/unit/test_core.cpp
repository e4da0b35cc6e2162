#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "dyson/core.hpp"
#include "dyson/errors.hpp"
#include "dyson/io.hpp"
#include "dyson/quadrature.hpp"

using namespace dyson;

TEST(Configuration, RestrictSplitsAtRadius) {
  const std::vector<double> xs{-3.0, -1.0, 0.5, 2.0, 4.0};
  const auto xi = Configuration::from_1d(xs);
  const auto in = restrict(xi, 2.0);
  const auto out = restrict_complement(xi, 2.0);
  EXPECT_EQ(in.size(), 2u);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_DOUBLE_EQ(in.window(), 2.0);
}

TEST(Configuration, LabelUnlabelRoundTrip) {
  const auto xi = Configuration::from_1d(std::vector<double>{3.0, -1.0, 2.0});
  const auto s = label(xi, LabelOrder::increasing);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], -1.0);
  EXPECT_DOUBLE_EQ(s[2], 3.0);
  EXPECT_TRUE(equivalent(unlabel(s), xi));
}

TEST(Configuration, RadialLabelling) {
  Configuration xi({Point(2.0, 0.0), Point(0.0, 1.0), Point(-0.5, 0.0)}, 2);
  const auto s = label(xi, LabelOrder::radial);
  EXPECT_DOUBLE_EQ(s.point(0).norm(), 0.5);
  EXPECT_DOUBLE_EQ(s.point(2).norm(), 2.0);
}

TEST(Configuration, CollisionsRejected) {
  const auto xi = Configuration::from_1d(std::vector<double>{1.0, 1.0});
  EXPECT_FALSE(xi.is_simple());
  EXPECT_THROW(label(xi, LabelOrder::increasing), CollisionError);
  EXPECT_THROW(LabeledState::increasing({2.0, 1.0}), DomainError);
}

TEST(Configuration, MinPairDistance) {
  const auto s = LabeledState::increasing({0.0, 0.25, 1.0});
  EXPECT_DOUBLE_EQ(min_pair_distance(s), 0.25);
  EXPECT_TRUE(std::isinf(min_pair_distance(LabeledState::increasing({1.0}))));
}

TEST(Io, DoublesRoundTripBitExactly) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const double back = parse_double(format_double(v));
    EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0) << format_double(v);
  }
  EXPECT_THROW(parse_double("1.5x"), DomainError);
}

TEST(Io, ConfigurationCsvAndJson) {
  Configuration xi({Point(0.1, -2.0), Point(1.0 / 3.0, 5.0)}, 2);
  EXPECT_TRUE(equivalent(configuration_from_csv(to_csv(xi)), xi));
  EXPECT_TRUE(equivalent(configuration_from_json(to_json(xi), 2), xi));
}

TEST(Io, SamplesCsvRoundTrip) {
  std::vector<Configuration> s{Configuration::from_1d(std::vector<double>{0.5, 1.5}),
                               Configuration::from_1d(std::vector<double>{}),
                               Configuration::from_1d(std::vector<double>{-2.0})};
  const auto back = samples_from_csv(samples_to_csv(s));
  ASSERT_EQ(back.size(), 3u);
  EXPECT_TRUE(back[1].empty());
  EXPECT_TRUE(equivalent(back.front(), s.front()));
  EXPECT_TRUE(equivalent(back.back(), s.back()));
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  const auto g = gauss_legendre(10, -1.0, 2.0);
  // degree 19 is integrated exactly
  const double v = g.integrate([](double x) { return std::pow(x, 19); });
  EXPECT_NEAR(v, (std::pow(2.0, 20) - 1.0) / 20.0, 1e-9);
  const auto c = composite_gauss_legendre(4, 8, 0.0, 1.0);
  EXPECT_EQ(c.size(), 32u);
  EXPECT_NEAR(c.integrate([](double x) { return std::exp(x); }), std::exp(1.0) - 1.0, 1e-14);
}

TEST(Quadrature, AdaptiveAndTanhSinh) {
  const auto a = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
  EXPECT_NEAR(a.value, 2.0, 1e-12);
  const auto t = integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(t.value, 2.0, 1e-10);
}

#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "dyson/errors.hpp"
#include "dyson/special.hpp"

using namespace dyson;

namespace {

// Size of Ai near x: the oscillation envelope on the left, Ai itself on the right.
double airy_scale(double x) {
  if (x < 0.0) return std::pow(-x, -0.25) / std::sqrt(M_PI);
  return std::max(std::abs(boost::math::airy_ai(x)), 1e-300);
}

}  // namespace

TEST(Airy, MatchesBoostAcrossRange) {
  double worst = 0.0, worst_d = 0.0;
  for (double x = -40.0; x <= 10.0; x += 0.0137) {
    const auto v = airy(x);
    const double s = airy_scale(x);
    const double sd = x < 0.0 ? s * std::sqrt(-x) + s : std::max(std::abs(boost::math::airy_ai_prime(x)), 1e-300);
    worst = std::max(worst, std::abs(v.ai - boost::math::airy_ai(x)) / s);
    worst_d = std::max(worst_d, std::abs(v.dai - boost::math::airy_ai_prime(x)) / sd);
  }
  EXPECT_LT(worst, 1e-12);
  EXPECT_LT(worst_d, 1e-12);
}

TEST(Airy, ValuesAtZero) {
  const auto v = airy(0.0);
  EXPECT_NEAR(v.ai, 0.35502805388781723926, 1e-16);
  EXPECT_NEAR(v.dai, -0.25881940379280679840, 1e-16);
}

TEST(Airy, DecaysMonotonicallyPastOne) {
  double prev = airy(1.0).ai;
  for (double x = 1.05; x <= 20.0; x += 0.05) {
    const double v = airy(x).ai;
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev) << x;
    prev = v;
  }
}

TEST(Airy, OutOfRangeThrows) {
  EXPECT_THROW(airy(25.0), DomainError);
  EXPECT_THROW(airy(-300.0), DomainError);
}

TEST(Bessel, MatchesBoost) {
  for (double alpha : {1.0, 1.5, 2.0, 3.7, 8.0}) {
    for (double x = 0.0; x <= 60.0; x += 0.173) {
      const auto v = bessel_j(alpha, x);
      const double ref = boost::math::cyl_bessel_j(alpha, x);
      const double dref = boost::math::cyl_bessel_j_prime(alpha, x);
      const double scale = std::max(1.0 / std::sqrt(1.0 + x), 1e-300);
      EXPECT_NEAR(v.j, ref, 1e-11 * scale) << "alpha " << alpha << " x " << x;
      EXPECT_NEAR(v.dj, dref, 1e-11 * scale) << "alpha " << alpha << " x " << x;
    }
  }
}

TEST(Bessel, OrderOneValues) {
  EXPECT_EQ(bessel_j(1.0, 0.0).j, 0.0);
  EXPECT_NEAR(bessel_j(1.0, 1.0).j, 0.44005058574493351596, 1e-15);
}

TEST(Bessel, DomainChecks) {
  EXPECT_THROW(bessel_j(0.5, 1.0), DomainError);
  EXPECT_THROW(bessel_j(1.0, -1.0), DomainError);
}

// Reference values from 30-digit contour quadrature.
TEST(Pearcey, FrozenValues) {
  const auto a = pearcey_pq(0.7);
  EXPECT_NEAR(a.p, -0.39335307220276531, 1e-13);
  EXPECT_NEAR(a.dp, -0.55291076822370467, 1e-13);
  EXPECT_NEAR(a.d2p, 0.064395082019033399, 1e-13);
  EXPECT_NEAR(a.q, -0.34439924329395104, 1e-13);
  EXPECT_NEAR(a.dq, 0.17087177282655378, 1e-13);
  EXPECT_NEAR(a.d2q, 0.18380236680800712, 1e-13);
  const auto b = pearcey_pq(-2.3);
  EXPECT_NEAR(b.p, 0.72547638429609822, 1e-13);
  EXPECT_NEAR(b.dp, 0.6230802401580527, 1e-13);
  EXPECT_NEAR(b.d2p, -1.8467601334000489, 1e-13);
  EXPECT_NEAR(b.q, -0.01789623935100236, 1e-13);
  EXPECT_NEAR(b.dq, -0.1377958523032168, 1e-13);
  EXPECT_NEAR(b.d2q, -0.16390324577203156, 1e-13);
}

TEST(Pearcey, Parity) {
  for (double t : {0.3, 1.7, 4.0}) {
    const auto a = pearcey_pq(t), b = pearcey_pq(-t);
    EXPECT_NEAR(a.q, b.q, 1e-14);
    EXPECT_NEAR(a.p, -b.p, 1e-14);
  }
  EXPECT_THROW(pearcey_pq(11.0), DomainError);
}

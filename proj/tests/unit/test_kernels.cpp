#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

#include "dyson/errors.hpp"
#include "dyson/kernels.hpp"

using namespace dyson;
using std::numbers::pi;

TEST(Kernels, SineDiagonalAndValues) {
  EXPECT_DOUBLE_EQ(sine_kernel(2.0, 2.0), 1.0 / pi);
  EXPECT_NEAR(sine_kernel(0.0, 1.0), std::sin(1.0) / pi, 1e-16);
  // across the near-diagonal switch
  EXPECT_NEAR(sine_kernel(0.0, 2e-6), sine_kernel(0.0, 5e-7), 1e-12);
}

// Reference values from 30-digit arithmetic.
TEST(Kernels, AiryFrozenValues) {
  EXPECT_NEAR(airy_kernel(0.0, 0.0), 0.066987483779663974, 1e-15);
  EXPECT_NEAR(airy_kernel(-2.0, 1.0), 0.039945689051187241, 1e-14);
  EXPECT_NEAR(airy_kernel(1.5, 1.5), 0.0017612709438439484, 1e-15);
  EXPECT_DOUBLE_EQ(airy_kernel(-2.0, 1.0), airy_kernel(1.0, -2.0));
}

TEST(Kernels, BesselFrozenValues) {
  EXPECT_NEAR(bessel_kernel(1.0, 1.0, 2.0), 0.034329103008111807, 1e-13);
  EXPECT_NEAR(bessel_kernel(1.0, 2.0, 2.0), 0.044636219831181894, 1e-13);
  EXPECT_NEAR(bessel_kernel(2.5, 3.0, 3.0), 0.0022492230079914799, 1e-13);
  EXPECT_DOUBLE_EQ(bessel_kernel(1.0, 0.0, 0.0), 0.0);
}

TEST(Kernels, GinibreDiagonalAndHermitian) {
  const std::complex<double> z{0.3, -1.2}, w{-0.4, 0.8};
  EXPECT_NEAR(std::real(ginibre_kernel(z, z)), 1.0 / pi, 1e-15);
  const auto a = ginibre_kernel(z, w), b = ginibre_kernel(w, z);
  EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-16);
  EXPECT_THROW(kernel_eval(KernelModel{GinibreKernel{}}, 0.0, 1.0), DomainError);
}

TEST(Kernels, PearceyFromFrozenIntegrals) {
  // P, P', P'' at 0.7 and Q, Q', Q'' at -2.3 from contour quadrature.
  const double p = -0.39335307220276531, dp = -0.55291076822370467, d2p = 0.064395082019033399;
  const double q = -0.01789623935100236, dq = -0.1377958523032168, d2q = -0.16390324577203156;
  const double expected = -(p * d2q - dp * dq + d2p * q) / (0.7 - -2.3);
  EXPECT_NEAR(pearcey_kernel(0.7, -2.3), expected, 1e-12);
  EXPECT_NEAR(pearcey_kernel(0.5, 0.5), 0.18318728895811984, 1e-10);
  EXPECT_GT(std::abs(pearcey_kernel(0.3, 1.1) - pearcey_kernel(1.1, 0.3)), 0.1);
  EXPECT_FALSE(kernel_hermitian(KernelModel{PearceyKernel{}}));
}

TEST(Kernels, PearceyDiagonalIsContinuous) {
  const double d = pearcey_kernel(1.3, 1.3);
  EXPECT_NEAR(pearcey_kernel(1.3, 1.3 + 1e-4), d, 1e-4);
  EXPECT_GT(d, 0.0);
}

TEST(Resolvent, AiryNystromResidualAndNeumann) {
  const ResolventOperator r(12.0, 64);
  EXPECT_LT(r.residual(), 1e-12);
  EXPECT_LT(r.lambda_max(), 0.05);
  EXPECT_LT((r.neumann(20) - r.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((r.matrix() - r.matrix().transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Resolvent, NearUnitOperatorIsRejected) {
  // K = 1/L on [0, L] has eigenvalue exactly 1
  auto flat = [](double, double) { return 1.0 / 4.0; };
  EXPECT_THROW(ResolventOperator(flat, 4.0, 16), IllConditionedError);
}

TEST(Tacnode, AblationReducesToTwoAiryKernels) {
  auto zero = std::make_shared<const ResolventOperator>(ResolventOperator::zero(12.0, 64));
  TacnodeTerms t;
  t.cross = false;
  const TacnodeEvaluator e(zero, t);
  for (double x : {-2.0, 0.0, 1.5}) {
    for (double y : {-1.0, 0.5, 2.0}) EXPECT_NEAR(e(x, y), airy_kernel(x, y) + airy_kernel(-x, -y), 1e-15);
  }
}

TEST(Tacnode, SymmetricAndGridConverged) {
  const auto k = TacnodeKernel::make();
  const KernelModel km = k;
  EXPECT_NEAR(kernel_eval(km, 0.4, -1.1), kernel_eval(km, -1.1, 0.4), 1e-14);
  EXPECT_NEAR(kernel_eval(km, 0.0, 0.0), 0.1141498096, 1e-9);
  const auto coarse = TacnodeKernel::make(32, 6.0);
  EXPECT_NEAR(kernel_eval(KernelModel{coarse}, 1.0, -0.5), kernel_eval(km, 1.0, -0.5), 1e-9);
}

TEST(Kernels, MatrixAndNames) {
  const std::vector<Point> pts{Point(0.0), Point(1.0), Point(2.0)};
  const auto m = kernel_matrix(KernelModel{SineKernel{}}, pts);
  EXPECT_NEAR(m(1, 1).real(), 1.0 / pi, 1e-16);
  EXPECT_NEAR(m(0, 2).real(), std::sin(2.0) / (2.0 * pi), 1e-16);
  EXPECT_EQ(kernel_name(KernelModel{AiryKernel{}}), "airy");
  EXPECT_EQ(kernel_dim(KernelModel{GinibreKernel{}}), 2);
}

#pragma once

// Correlation kernels of the limiting point processes, the Nystrom resolvent of
// the Airy kernel on [0, L] and the tacnode kernel built from it.

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "dyson/core.hpp"
#include "dyson/quadrature.hpp"
#include "dyson/special.hpp"

namespace dyson {

/// Below this separation kernels with a difference quotient are expanded
/// around the diagonal instead of divided.
inline constexpr double kNearDiagonal = 1e-6;

/// sin(x - y) / (pi (x - y)).
double sine_kernel(double x, double y);
/// (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y); diagonal Ai'(x)^2 - x Ai(x)^2.
double airy_kernel(double x, double y);
/// (J(sqrt x) sqrt y J'(sqrt y) - sqrt x J'(sqrt x) J(sqrt y)) / (2 (x - y)) on [0, inf).
double bessel_kernel(double alpha, double x, double y);
/// (1/pi) exp(-|z|^2/2 - |w|^2/2 + z conj(w)).
std::complex<double> ginibre_kernel(std::complex<double> z, std::complex<double> w);
/// -(P(x) Q''(y) - P'(x) Q'(y) + P''(x) Q(y)) / (x - y) for |x|, |y| <= 10, the
/// sign making K(x, x) the one-point density. Not symmetric.
double pearcey_kernel(double x, double y, const PearceyOptions& opts = {});

/// R = (I - K)^{-1} K for an integral operator restricted to [0, L], discretized
/// on Gauss-Legendre nodes (Nystrom). Immutable after construction.
class ResolventOperator {
 public:
  using Kernel = std::function<double(double, double)>;

  /// Airy kernel on [0, L] with n nodes.
  ResolventOperator(double length, std::size_t n);
  /// Any symmetric kernel. Throws IllConditionedError when the discretized
  /// operator has an eigenvalue too close to (or above) 1.
  ResolventOperator(const Kernel& kernel, double length, std::size_t n);

  /// Zero resolvent on the Airy grid (used to isolate terms of the tacnode kernel).
  static ResolventOperator zero(double length, std::size_t n);

  const QuadratureGrid& grid() const noexcept { return grid_; }
  /// R at node pairs.
  const Eigen::MatrixXd& matrix() const noexcept { return r_; }
  /// K at node pairs.
  const Eigen::MatrixXd& kernel_matrix() const noexcept { return k_; }
  /// sup |R - K W R - K| over node pairs.
  double residual() const noexcept { return residual_; }
  /// Largest eigenvalue of the symmetrized discrete operator W^{1/2} K W^{1/2}.
  double lambda_max() const noexcept { return lambda_max_; }
  /// 1 / (1 - lambda_max).
  double condition() const noexcept { return condition_; }

  /// K + KWK + ... (`terms` terms) on the same grid.
  Eigen::MatrixXd neumann(std::size_t terms) const;

  static constexpr double kMaxCondition = 1e10;

 private:
  ResolventOperator() = default;
  void solve();

  QuadratureGrid grid_;
  Eigen::MatrixXd k_;
  Eigen::MatrixXd r_;
  double residual_ = 0.0;
  double lambda_max_ = 0.0;
  double condition_ = 1.0;
};

/// Which parts of L_tac to include; everything by default.
struct TacnodeTerms {
  bool airy = true;      ///< K_Ai(x, y)
  bool resolvent = true;  ///< +c int Ai(y + cu) R(u,v) Ai(x + cv)
  bool cross = true;      ///< -c int Ai(-y + cu) Ai(u + v) Ai(x + cv)
  bool mixed = true;      ///< -c int Ai(-y + cu) R(u,v) Ai(v + w) Ai(x + cw)
};

/// K_tac(x, y) = L_tac(x, y) + L_tac(-x, -y) with c = 2^{1/3}. The integrals over
/// (0, U)^k use the resolvent's grid (U = its length) and are contracted with
/// precomputed matrices. Airy values beyond the supported range (argument > 20)
/// are below 2e-27 and are taken as 0.
class TacnodeEvaluator {
 public:
  explicit TacnodeEvaluator(std::shared_ptr<const ResolventOperator> resolvent, TacnodeTerms terms = {});

  double operator()(double x, double y) const;
  /// The four terms of L_tac(x, y) (not yet symmetrized).
  std::array<double, 4> l_terms(double x, double y) const;
  double l_tac(double x, double y) const;

  const ResolventOperator& resolvent() const noexcept { return *resolvent_; }

 private:
  std::shared_ptr<const ResolventOperator> resolvent_;
  TacnodeTerms terms_;
  Eigen::MatrixXd m2_, m3_, m4_;
};

struct SineKernel {};
struct AiryKernel {};
struct BesselKernel {
  double alpha = 1.0;
};
struct GinibreKernel {};
struct PearceyKernel {
  PearceyOptions options;
};
struct TacnodeKernel {
  std::shared_ptr<const TacnodeEvaluator> evaluator;
  /// Evaluator with an (n, U) resolvent grid.
  static TacnodeKernel make(std::size_t n = 64, double length = 12.0);
};

using KernelModel = std::variant<SineKernel, AiryKernel, BesselKernel, GinibreKernel, PearceyKernel, TacnodeKernel>;

std::string kernel_name(const KernelModel& k);
/// Domain dimension (2 for Ginibre).
int kernel_dim(const KernelModel& k);
/// Kernel symmetric in its arguments (all except Pearcey).
bool kernel_hermitian(const KernelModel& k);

/// K(x, y) at points of the variant's domain; throws DomainError outside it.
std::complex<double> kernel_eval(const KernelModel& k, const Point& x, const Point& y);
/// Real-line variants only.
double kernel_eval(const KernelModel& k, double x, double y);

/// [K(x_i, x_j)].
Eigen::MatrixXcd kernel_matrix(const KernelModel& k, std::span<const Point> pts);

}  // namespace dyson

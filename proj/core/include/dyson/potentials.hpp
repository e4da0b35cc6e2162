#pragma once

// Free and pair potentials, the window Hamiltonian H_r, the finite-N Gibbs
// log-density of the Dyson log-gas and its drift, and a numerical check of the
// quasi-Gibbs sandwich at small N.

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyson/core.hpp"

namespace dyson {

/// Psi(x, y). Gradients are taken with respect to the first argument.
class PairPotential {
 public:
  using ValueFn = std::function<double(const Point&, const Point&)>;
  using GradFn = std::function<Point(const Point&, const Point&)>;

  /// Psi(x, y) = -beta log|x - y|; +infinity at coincidence.
  static PairPotential log_gas(double beta);
  static PairPotential custom(ValueFn value, GradFn grad_x);
  static PairPotential zero();

  double value(const Point& x, const Point& y) const;
  Point gradient(const Point& x, const Point& y) const;

  bool is_log_gas() const noexcept { return std::holds_alternative<LogGas>(kind_); }
  /// Throws DomainError for other kinds.
  double log_gas_beta() const;

 private:
  struct LogGas {
    double beta;
  };
  struct Custom {
    ValueFn value;
    GradFn grad;
  };
  struct Zero {};
  explicit PairPotential(std::variant<LogGas, Custom, Zero> k) : kind_(std::move(k)) {}
  std::variant<LogGas, Custom, Zero> kind_;
};

/// Phi(x).
class FreePotential {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using GradFn = std::function<Point(const Point&)>;

  static FreePotential zero();
  /// Phi(x) = c |x|^2.
  static FreePotential quadratic(double c);
  static FreePotential custom(ValueFn value, GradFn grad);

  double value(const Point& x) const;
  Point gradient(const Point& x) const;

 private:
  struct Zero {};
  struct Quadratic {
    double c;
  };
  struct Custom {
    ValueFn value;
    GradFn grad;
  };
  explicit FreePotential(std::variant<Zero, Quadratic, Custom> k) : kind_(std::move(k)) {}
  std::variant<Zero, Quadratic, Custom> kind_;
};

/// Increasing window radii b_1 < b_2 < ...; S_r = {|x| < b_r}.
class WindowSchedule {
 public:
  /// b_r = r.
  static WindowSchedule identity() { return WindowSchedule(); }
  explicit WindowSchedule(std::vector<std::int64_t> radii);

  /// b_r for r >= 1.
  double radius(std::int64_t r) const;

 private:
  WindowSchedule() = default;
  std::vector<std::int64_t> radii_;  // empty means identity
};

/// H_r(xi) = sum_{x in S_r} Phi(x) + sum_{j<k, x_j,x_k in S_r} Psi(x_j, x_k).
/// May return +infinity.
double hamiltonian(const Configuration& xi, std::int64_t r, const FreePotential& phi, const PairPotential& psi,
                   const WindowSchedule& schedule = WindowSchedule::identity());

/// beta log h_N(x) - (beta/4N)|x|^2 with h_N = prod_{i<j}|x_i - x_j|;
/// -infinity when two coordinates coincide. Requires x.size() == N.
double gibbs_log_density(std::span<const double> x, double beta, std::size_t n);
double gibbs_log_density(const LabeledState& x, double beta, std::size_t n);

enum class DysonModel {
  plain,  ///< pure log-gas interaction
  ou,     ///< with the Ornstein-Uhlenbeck confinement -(beta/4N) x_j
};

/// Component j: (beta/2) sum_{k != j} 1/(x_j - x_k), minus (beta/4N) x_j for the
/// OU model. Throws CollisionError if two particles are within tolerance.
std::vector<double> gibbs_drift(std::span<const double> x, double beta, std::size_t n, DysonModel model);
std::vector<double> gibbs_drift(const LabeledState& x, double beta, std::size_t n, DysonModel model);

/// sum_{x in eta, y in outside} Psi(x, y).
double cross_interaction(const Configuration& eta, const Configuration& outside, const PairPotential& psi);

struct SandwichConfig {
  std::size_t n = 4;
  double beta = 2.0;
  std::int64_t r = 1;
  std::size_t m = 2;
  std::size_t trials = 8;
  std::uint64_t seed = 1;
  /// Multiplies the pair interaction everywhere (1 = the Dyson log-gas, 0 = no interaction).
  double interaction_scale = 1.0;
  /// Gauss-Legendre nodes per interior coordinate.
  std::size_t quadrature_nodes = 32;
  std::size_t mcmc_sweeps = 200;
  WindowSchedule schedule = WindowSchedule::identity();
};

struct SandwichTrial {
  std::vector<double> outside;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

struct SandwichReport {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::vector<SandwichTrial> trials;
};

/// For the finite-N log-gas, draws outside configurations from the law
/// conditioned on exactly m points in S_r, and on each computes the density of
/// the interior conditional law with respect to e^{-H_r} times the uniform
/// m-point Poisson law on S_r:
///   ratio(eta) = |S_r|^m e^{-W(eta, outside)} / int_{S_r^m} e^{-H_r - W},
/// over a tensor Gauss-Legendre grid of interior positions. Reports its range.
/// Supports m <= 4.
SandwichReport quasi_gibbs_sandwich_check(const SandwichConfig& cfg);

nlohmann::json to_json(const SandwichReport& report);

}  // namespace dyson

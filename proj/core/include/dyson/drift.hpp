#pragma once

// Truncated drift evaluators of the ISDEs: bulk (sine), soft edge (Airy, with
// compensator), hard edge (Bessel), Ginibre, the finite-N Dyson models and the
// m-particle system in a frozen environment.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dyson/core.hpp"
#include "dyson/potentials.hpp"

namespace dyson {

struct BulkModel {
  double beta = 2.0;
  double r = kUnboundedWindow;  ///< truncation radius
};

struct SoftEdgeModel {
  double beta = 2.0;
  double r = kUnboundedWindow;
};

struct BesselModel {
  double alpha = 1.0;
  double r = kUnboundedWindow;
};

struct GinibreModel {
  double r = kUnboundedWindow;
};

struct FiniteNModel {
  double beta = 2.0;
  std::size_t n = 1;
  DysonModel kind = DysonModel::plain;
};

struct FrozenEnvModel {
  std::size_t m = 1;
  Configuration env;
  FreePotential phi = FreePotential::zero();
  PairPotential psi = PairPotential::log_gas(2.0);
};

using DriftModel = std::variant<BulkModel, SoftEdgeModel, BesselModel, GinibreModel, FiniteNModel, FrozenEnvModel>;

/// Throws DomainError for beta <= 0, alpha < 1, r <= 0, n == 0.
void validate(const DriftModel& model);
/// Spatial dimension of the model's particles.
int model_dim(const DriftModel& model);
std::string model_name(const DriftModel& model);

/// (beta/2) sum_{k != j, |x_k| < r} 1/(x_j - x_k).
double bulk_drift(std::size_t j, const LabeledState& x, double r, double beta);

/// int_{-r}^{r} rho(x)/(-x) dx for rho(x) = sqrt(-x)/pi on x < 0, i.e. 2 sqrt(r)/pi.
double soft_edge_compensator(double r);
/// The same integral by tanh-sinh quadrature (cross-check of the closed form).
double soft_edge_compensator_quadrature(double r);

/// (beta/2) [sum_{k != j, |x_k| < r} 1/(x_j - x_k) - 2 sqrt(r)/pi].
double soft_edge_drift(std::size_t j, const LabeledState& x, double r, double beta);

/// alpha/(2 x_j) + sum_{k != j, x_k < r} 1/(x_j - x_k); coordinates must be positive.
double bessel_drift(std::size_t j, const LabeledState& x, double alpha, double r);

/// -x_j + sum_{k != j, |x_k| < r} (x_j - x_k)/|x_j - x_k|^2 for a 2D state.
Point ginibre_drift(std::size_t j, const LabeledState& x, double r);

/// -grad Phi(y_j)/2 - sum_{k != j} grad Psi(y_j, y_k)/2 - sum_{x in env} grad Psi(y_j, x)/2.
Point frozen_env_drift(std::size_t j, const LabeledState& y, const Configuration& env, const FreePotential& phi,
                       const PairPotential& psi);

/// All drift components of `x` under `model`, flat in the layout of x.coords().
/// Collisions (distance < kCollisionTolerance) throw CollisionError.
std::vector<double> drift_vector(const DriftModel& model, const LabeledState& x);

/// Drift of particle j evaluated with the truncation radius replaced by each
/// entry of `radii` (bulk, soft-edge, Bessel and Ginibre models).
struct DriftDiagnostic {
  std::vector<double> radii;
  std::vector<std::vector<double>> values;  ///< one entry per coordinate
  std::vector<double> diffs;                ///< |d_i - d_{i-1}|, NaN for the first radius
};

DriftDiagnostic drift_convergence_diag(std::size_t j, const LabeledState& x, std::span<const double> radii,
                                       const DriftModel& model);

/// CSV with columns radius, value (value_x, value_y in 2D), diff.
std::string to_csv(const DriftDiagnostic& diag);

}  // namespace dyson

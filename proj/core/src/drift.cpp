#include "dyson/drift.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dyson/errors.hpp"
#include "dyson/io.hpp"
#include "dyson/quadrature.hpp"

namespace dyson {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_index(std::size_t j, const LabeledState& x) {
  if (j >= x.size()) throw DomainError("drift: particle index out of range");
}

void check_radius(double r, const LabeledState& x) {
  if (!(r > 0.0)) throw DomainError("drift: truncation radius must be positive");
  if (x.window() < r) throw DomainError("drift: state window does not cover the truncation radius");
}

[[noreturn]] void collision(std::size_t j, std::size_t k) {
  throw CollisionError("drift: particles " + std::to_string(j) + " and " + std::to_string(k) + " collide");
}

// sum_{k != j, |x_k| < r} 1/(x_j - x_k)
double pair_sum_1d(std::size_t j, const LabeledState& x, double r) {
  const double xj = x[j];
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k == j || !(std::abs(x[k]) < r)) continue;
    const double d = xj - x[k];
    if (std::abs(d) < kCollisionTolerance) collision(j, k);
    s += 1.0 / d;
  }
  return s;
}

Point point_of(int dim, double a, double b) { return dim == 1 ? Point(a) : Point(a, b); }

}  // namespace

void validate(const DriftModel& model) {
  std::visit(overloaded{[](const BulkModel& m) {
                          if (!(m.beta > 0.0)) throw DomainError("bulk model: beta must be positive");
                          if (!(m.r > 0.0)) throw DomainError("bulk model: radius must be positive");
                        },
                        [](const SoftEdgeModel& m) {
                          if (!(m.beta > 0.0)) throw DomainError("soft-edge model: beta must be positive");
                          if (!(m.r > 0.0)) throw DomainError("soft-edge model: radius must be positive");
                        },
                        [](const BesselModel& m) {
                          if (!(m.alpha >= 1.0)) throw DomainError("Bessel model: alpha must be >= 1");
                          if (!(m.r > 0.0)) throw DomainError("Bessel model: radius must be positive");
                        },
                        [](const GinibreModel& m) {
                          if (!(m.r > 0.0)) throw DomainError("Ginibre model: radius must be positive");
                        },
                        [](const FiniteNModel& m) {
                          if (!(m.beta > 0.0)) throw DomainError("finite-N model: beta must be positive");
                          if (m.n == 0) throw DomainError("finite-N model: N must be positive");
                        },
                        [](const FrozenEnvModel& m) {
                          if (m.m == 0) throw DomainError("frozen-environment model: m must be positive");
                        }},
             model);
}

int model_dim(const DriftModel& model) {
  return std::visit(overloaded{[](const GinibreModel&) { return 2; },
                               [](const FrozenEnvModel& m) { return m.env.empty() ? 0 : m.env.dim(); },
                               [](const auto&) { return 1; }},
                    model);
}

std::string model_name(const DriftModel& model) {
  return std::visit(overloaded{[](const BulkModel&) { return std::string("bulk"); },
                               [](const SoftEdgeModel&) { return std::string("soft_edge"); },
                               [](const BesselModel&) { return std::string("bessel"); },
                               [](const GinibreModel&) { return std::string("ginibre"); },
                               [](const FiniteNModel&) { return std::string("finite_n"); },
                               [](const FrozenEnvModel&) { return std::string("frozen_env"); }},
                    model);
}

double bulk_drift(std::size_t j, const LabeledState& x, double r, double beta) {
  check_index(j, x);
  check_radius(r, x);
  if (x.dim() != 1) throw DomainError("bulk_drift: 1D state required");
  return 0.5 * beta * pair_sum_1d(j, x, r);
}

double soft_edge_compensator(double r) {
  if (r < 0.0) throw DomainError("soft_edge_compensator: negative radius");
  return 2.0 * std::sqrt(r) / std::numbers::pi;
}

double soft_edge_compensator_quadrature(double r) {
  if (r < 0.0) throw DomainError("soft_edge_compensator: negative radius");
  if (r == 0.0) return 0.0;
  auto f = [](double x) { return 1.0 / (std::numbers::pi * std::sqrt(-x)); };
  return integrate_tanh_sinh(f, -r, 0.0, 1e-15).value;
}

double soft_edge_drift(std::size_t j, const LabeledState& x, double r, double beta) {
  check_index(j, x);
  check_radius(r, x);
  if (x.dim() != 1) throw DomainError("soft_edge_drift: 1D state required");
  return 0.5 * beta * (pair_sum_1d(j, x, r) - soft_edge_compensator(r));
}

double bessel_drift(std::size_t j, const LabeledState& x, double alpha, double r) {
  check_index(j, x);
  check_radius(r, x);
  if (x.dim() != 1) throw DomainError("bessel_drift: 1D state required");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0)) throw DomainError("bessel_drift: coordinates must be positive");
  }
  return alpha / (2.0 * x[j]) + pair_sum_1d(j, x, r);
}

Point ginibre_drift(std::size_t j, const LabeledState& x, double r) {
  check_index(j, x);
  check_radius(r, x);
  if (x.dim() != 2) throw DomainError("ginibre_drift: 2D state required");
  const Point pj = x.point(j);
  double gx = -pj.x();
  double gy = -pj.y();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k == j) continue;
    const Point pk = x.point(k);
    if (!(pk.norm() < r)) continue;
    const double dx = pj.x() - pk.x();
    const double dy = pj.y() - pk.y();
    const double d2 = dx * dx + dy * dy;
    if (std::sqrt(d2) < kCollisionTolerance) collision(j, k);
    gx += dx / d2;
    gy += dy / d2;
  }
  return Point(gx, gy);
}

Point frozen_env_drift(std::size_t j, const LabeledState& y, const Configuration& env, const FreePotential& phi,
                       const PairPotential& psi) {
  check_index(j, y);
  if (!env.empty() && env.dim() != y.dim()) throw DomainError("frozen_env_drift: dimension mismatch");
  const int dim = y.dim();
  const Point yj = y.point(j);
  double g[2] = {0.0, 0.0};
  auto add = [&](const Point& p) {
    g[0] += p[0];
    if (dim == 2) g[1] += p[1];
  };
  add(phi.gradient(yj));
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (k == j) continue;
    const Point yk = y.point(k);
    if (distance(yj, yk) < kCollisionTolerance) collision(j, k);
    add(psi.gradient(yj, yk));
  }
  for (std::size_t k = 0; k < env.size(); ++k) {
    if (distance(yj, env[k]) < kCollisionTolerance) {
      throw CollisionError("frozen_env_drift: tagged particle " + std::to_string(j) + " hits environment point");
    }
    add(psi.gradient(yj, env[k]));
  }
  return point_of(dim, -0.5 * g[0], -0.5 * g[1]);
}

std::vector<double> drift_vector(const DriftModel& model, const LabeledState& x) {
  const std::size_t n = x.size();
  std::vector<double> out(x.coords().size(), 0.0);
  std::visit(overloaded{[&](const BulkModel& m) {
                          for (std::size_t j = 0; j < n; ++j) out[j] = bulk_drift(j, x, m.r, m.beta);
                        },
                        [&](const SoftEdgeModel& m) {
                          for (std::size_t j = 0; j < n; ++j) out[j] = soft_edge_drift(j, x, m.r, m.beta);
                        },
                        [&](const BesselModel& m) {
                          for (std::size_t j = 0; j < n; ++j) out[j] = bessel_drift(j, x, m.alpha, m.r);
                        },
                        [&](const GinibreModel& m) {
                          for (std::size_t j = 0; j < n; ++j) {
                            const Point p = ginibre_drift(j, x, m.r);
                            out[2 * j] = p.x();
                            out[2 * j + 1] = p.y();
                          }
                        },
                        [&](const FiniteNModel& m) {
                          if (x.dim() != 1) throw DomainError("finite-N model: 1D state required");
                          out = gibbs_drift(x.coords(), m.beta, m.n, m.kind);
                        },
                        [&](const FrozenEnvModel& m) {
                          if (n != m.m) throw DomainError("frozen-environment model: state must hold m particles");
                          const auto d = static_cast<std::size_t>(x.dim());
                          for (std::size_t j = 0; j < n; ++j) {
                            const Point p = frozen_env_drift(j, x, m.env, m.phi, m.psi);
                            for (std::size_t c = 0; c < d; ++c) out[d * j + c] = p[static_cast<int>(c)];
                          }
                        }},
             model);
  return out;
}

DriftDiagnostic drift_convergence_diag(std::size_t j, const LabeledState& x, std::span<const double> radii,
                                       const DriftModel& model) {
  DriftDiagnostic diag;
  for (double r : radii) {
    std::vector<double> v = std::visit(
        overloaded{[&](const BulkModel& m) { return std::vector<double>{bulk_drift(j, x, r, m.beta)}; },
                   [&](const SoftEdgeModel& m) { return std::vector<double>{soft_edge_drift(j, x, r, m.beta)}; },
                   [&](const BesselModel& m) { return std::vector<double>{bessel_drift(j, x, m.alpha, r)}; },
                   [&](const GinibreModel&) {
                     const Point p = ginibre_drift(j, x, r);
                     return std::vector<double>{p.x(), p.y()};
                   },
                   [](const auto&) -> std::vector<double> {
                     throw DomainError("drift_convergence_diag: model has no truncation radius");
                   }},
        model);
    double diff = std::numeric_limits<double>::quiet_NaN();
    if (!diag.values.empty()) {
      double s = 0.0;
      for (std::size_t c = 0; c < v.size(); ++c) s += std::pow(v[c] - diag.values.back()[c], 2);
      diff = std::sqrt(s);
    }
    diag.radii.push_back(r);
    diag.values.push_back(std::move(v));
    diag.diffs.push_back(diff);
  }
  return diag;
}

std::string to_csv(const DriftDiagnostic& diag) {
  std::ostringstream os;
  const bool two = !diag.values.empty() && diag.values.front().size() == 2;
  os << (two ? "radius,value_x,value_y,diff\n" : "radius,value,diff\n");
  for (std::size_t i = 0; i < diag.radii.size(); ++i) {
    os << format_double(diag.radii[i]);
    for (double v : diag.values[i]) os << ',' << format_double(v);
    os << ',' << (std::isnan(diag.diffs[i]) ? std::string() : format_double(diag.diffs[i])) << '\n';
  }
  return os.str();
}

}  // namespace dyson

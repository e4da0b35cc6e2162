#include "dyson/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"
#include "dyson/random.hpp"

namespace dyson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Point make_point(int dim, double x, double y) { return dim == 1 ? Point(x) : Point(x, y); }

}  // namespace

PairPotential PairPotential::log_gas(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("log_gas: beta must be positive");
  return PairPotential(LogGas{beta});
}

PairPotential PairPotential::custom(ValueFn value, GradFn grad_x) {
  if (!value || !grad_x) throw DomainError("PairPotential::custom: value and gradient required");
  return PairPotential(Custom{std::move(value), std::move(grad_x)});
}

PairPotential PairPotential::zero() { return PairPotential(Zero{}); }

double PairPotential::value(const Point& x, const Point& y) const {
  return std::visit(overloaded{[&](const LogGas& g) {
                                 const double d = distance(x, y);
                                 return d == 0.0 ? kInf : -g.beta * std::log(d);
                               },
                               [&](const Custom& c) { return c.value(x, y); }, [](const Zero&) { return 0.0; }},
                    kind_);
}

Point PairPotential::gradient(const Point& x, const Point& y) const {
  return std::visit(overloaded{[&](const LogGas& g) {
                                 const double dx = x.x() - y.x();
                                 const double dy = x.dim() == 2 ? x.y() - y.y() : 0.0;
                                 const double d2 = dx * dx + dy * dy;
                                 if (d2 == 0.0) throw CollisionError("log_gas gradient at coincident points");
                                 return make_point(x.dim(), -g.beta * dx / d2, -g.beta * dy / d2);
                               },
                               [&](const Custom& c) { return c.grad(x, y); },
                               [&](const Zero&) { return make_point(x.dim(), 0.0, 0.0); }},
                    kind_);
}

double PairPotential::log_gas_beta() const {
  if (const auto* g = std::get_if<LogGas>(&kind_)) return g->beta;
  throw DomainError("pair potential is not a log-gas");
}

FreePotential FreePotential::zero() { return FreePotential(Zero{}); }

FreePotential FreePotential::quadratic(double c) {
  if (!std::isfinite(c)) throw DomainError("quadratic: coefficient must be finite");
  return FreePotential(Quadratic{c});
}

FreePotential FreePotential::custom(ValueFn value, GradFn grad) {
  if (!value || !grad) throw DomainError("FreePotential::custom: value and gradient required");
  return FreePotential(Custom{std::move(value), std::move(grad)});
}

double FreePotential::value(const Point& x) const {
  return std::visit(overloaded{[](const Zero&) { return 0.0; },
                               [&](const Quadratic& q) { return q.c * x.norm() * x.norm(); },
                               [&](const Custom& c) { return c.value(x); }},
                    kind_);
}

Point FreePotential::gradient(const Point& x) const {
  return std::visit(overloaded{[&](const Zero&) { return make_point(x.dim(), 0.0, 0.0); },
                               [&](const Quadratic& q) { return make_point(x.dim(), 2 * q.c * x.x(), 2 * q.c * x.y()); },
                               [&](const Custom& c) { return c.grad(x); }},
                    kind_);
}

WindowSchedule::WindowSchedule(std::vector<std::int64_t> radii) : radii_(std::move(radii)) {
  if (radii_.empty()) throw DomainError("WindowSchedule: empty schedule");
  if (radii_.front() <= 0) throw DomainError("WindowSchedule: radii must be positive");
  for (std::size_t i = 1; i < radii_.size(); ++i) {
    if (radii_[i] <= radii_[i - 1]) throw DomainError("WindowSchedule: radii must be strictly increasing");
  }
}

double WindowSchedule::radius(std::int64_t r) const {
  if (r < 1) throw DomainError("WindowSchedule: index must be >= 1");
  if (radii_.empty()) return static_cast<double>(r);
  if (static_cast<std::size_t>(r) > radii_.size()) {
    throw DomainError("WindowSchedule: index " + std::to_string(r) + " beyond the schedule");
  }
  return static_cast<double>(radii_[static_cast<std::size_t>(r - 1)]);
}

double hamiltonian(const Configuration& xi, std::int64_t r, const FreePotential& phi, const PairPotential& psi,
                   const WindowSchedule& schedule) {
  const double b = schedule.radius(r);
  std::vector<Point> in;
  for (const auto& p : xi.points()) {
    if (p.norm() < b) in.push_back(p);
  }
  double h = 0.0;
  for (const auto& p : in) h += phi.value(p);
  for (std::size_t j = 0; j < in.size(); ++j) {
    for (std::size_t k = j + 1; k < in.size(); ++k) h += psi.value(in[j], in[k]);
  }
  return std::isnan(h) ? kInf : h;
}

double gibbs_log_density(std::span<const double> x, double beta, std::size_t n) {
  if (x.size() != n) throw DomainError("gibbs_log_density: state length differs from N");
  if (!(beta > 0.0)) throw DomainError("gibbs_log_density: beta must be positive");
  double log_h = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq += x[i] * x[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(x[i] - x[j]);
      if (d == 0.0) return -kInf;
      log_h += std::log(d);
    }
  }
  return beta * log_h - beta / (4.0 * static_cast<double>(n)) * sq;
}

double gibbs_log_density(const LabeledState& x, double beta, std::size_t n) {
  if (x.dim() != 1) throw DomainError("gibbs_log_density: 1D state required");
  return gibbs_log_density(x.coords(), beta, n);
}

std::vector<double> gibbs_drift(std::span<const double> x, double beta, std::size_t n, DysonModel model) {
  if (x.size() != n) throw DomainError("gibbs_drift: state length differs from N");
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      if (std::abs(d) < kCollisionTolerance) {
        throw CollisionError("gibbs_drift: particles " + std::to_string(j) + " and " + std::to_string(k) +
                             " collide");
      }
      s += 1.0 / d;
    }
    out[j] = 0.5 * beta * s;
    if (model == DysonModel::ou) out[j] -= beta / (4.0 * static_cast<double>(n)) * x[j];
  }
  return out;
}

std::vector<double> gibbs_drift(const LabeledState& x, double beta, std::size_t n, DysonModel model) {
  if (x.dim() != 1) throw DomainError("gibbs_drift: 1D state required");
  return gibbs_drift(x.coords(), beta, n, model);
}

double cross_interaction(const Configuration& eta, const Configuration& outside, const PairPotential& psi) {
  double s = 0.0;
  for (const auto& x : eta.points()) {
    for (const auto& y : outside.points()) s += psi.value(x, y);
  }
  return s;
}

namespace {

// Finite-N log-gas with the pair part scaled, conditioned on exactly m points in (-b, b).
std::vector<double> sample_outside(const SandwichConfig& cfg, double b, Rng& rng, std::vector<double>& state) {
  const std::size_t n = cfg.n;
  const double conf = cfg.beta / (4.0 * static_cast<double>(n));
  const double pair = cfg.interaction_scale * cfg.beta;
  auto site = [&](std::size_t i, double xi) {
    double e = -conf * xi * xi;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double d = std::abs(xi - state[k]);
      if (d == 0.0) return -kInf;
      e += pair * std::log(d);
    }
    return e;
  };
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double step = std::max(0.25, b / 2.0);
  for (std::size_t sweep = 0; sweep < cfg.mcmc_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const double old = state[i];
      const double prop = old + step * gauss(rng);
      if ((std::abs(prop) < b) != (std::abs(old) < b)) continue;
      const double delta = site(i, prop) - site(i, old);
      if (std::log(unif(rng)) < delta) state[i] = prop;
    }
  }
  std::vector<double> out;
  for (double v : state) {
    if (std::abs(v) >= b) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

SandwichReport quasi_gibbs_sandwich_check(const SandwichConfig& cfg) {
  if (cfg.n == 0 || cfg.n > 12) throw DomainError("sandwich check: N must be in [1, 12]");
  if (cfg.m > cfg.n) throw DomainError("sandwich check: m exceeds N");
  if (cfg.m > 4) throw DomainError("sandwich check: m <= 4 supported");
  if (!(cfg.beta > 0.0)) throw DomainError("sandwich check: beta must be positive");
  if (cfg.interaction_scale < 0.0) throw DomainError("sandwich check: negative interaction scale");
  if (cfg.trials == 0) throw DomainError("sandwich check: need at least one trial");
  if (cfg.m > 0 && cfg.quadrature_nodes < 2) throw DomainError("sandwich check: too few quadrature nodes");

  const double b = cfg.schedule.radius(cfg.r);
  const std::size_t n = cfg.n;
  const std::size_t m = cfg.m;
  const double conf = cfg.beta / (4.0 * static_cast<double>(n));
  const double pair = cfg.interaction_scale * cfg.beta;

  // Start with m evenly spaced points inside and the rest alternating outside.
  std::vector<double> state(n);
  for (std::size_t i = 0; i < m; ++i) {
    state[i] = -b + 2.0 * b * (static_cast<double>(i) + 1.0) / (static_cast<double>(m) + 1.0);
  }
  for (std::size_t i = m; i < n; ++i) {
    const std::size_t k = i - m;
    const double mag = b + 1.0 + 2.0 * static_cast<double>(k / 2);
    state[i] = k % 2 == 0 ? mag : -mag;
  }

  const auto grid = gauss_legendre(std::max<std::size_t>(cfg.quadrature_nodes, 1), -b, b);
  const std::size_t q = grid.size();
  // Pair table log|t_a - t_b| (diagonal -inf).
  std::vector<double> lpair(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t c = 0; c < q; ++c) {
      lpair[a * q + c] = a == c ? -kInf : std::log(std::abs(grid.nodes[a] - grid.nodes[c]));
    }
  }

  Rng rng = make_rng(cfg.seed, 0);
  SandwichReport report;
  report.ratio_min = kInf;
  report.ratio_max = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    SandwichTrial trial;
    trial.outside = sample_outside(cfg, b, rng, state);

    // g(t) = -W per interior point; single-site weight adds -Phi and the log weight.
    std::vector<double> g(q), site(q);
    for (std::size_t a = 0; a < q; ++a) {
      double s = 0.0;
      for (double y : trial.outside) s += pair * std::log(std::abs(grid.nodes[a] - y));
      g[a] = s;
      site[a] = s - conf * grid.nodes[a] * grid.nodes[a] + std::log(grid.weights[a]);
    }

    // log int_{S^m} e^{-H - W} over the tensor grid.
    double log_z = m == 0 ? 0.0 : -kInf;
    if (m > 0) {
      std::vector<std::size_t> idx(m, 0);
      while (true) {
        double e = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          e += site[idx[i]];
          if (pair == 0.0) continue;  // avoid 0 * -inf on the diagonal
          for (std::size_t j = i + 1; j < m; ++j) e += pair * lpair[idx[i] * q + idx[j]];
        }
        log_z = log_sum_exp(log_z, e);
        std::size_t d = 0;
        while (d < m && ++idx[d] == q) idx[d++] = 0;
        if (d == m) break;
      }
    }
    if (!std::isfinite(log_z)) throw DomainError("sandwich check: conditioning has no interior mass");

    const double log_vol = static_cast<double>(m) * std::log(2.0 * b);
    const auto [gmin, gmax] = std::minmax_element(g.begin(), g.end());
    const double mm = static_cast<double>(m);
    trial.ratio_min = std::exp(log_vol + mm * *gmin - log_z);
    trial.ratio_max = std::exp(log_vol + mm * *gmax - log_z);
    if (!(trial.ratio_min > 0.0) || !std::isfinite(trial.ratio_max)) {
      throw DomainError("sandwich check: ratio not finite and positive");
    }
    report.ratio_min = std::min(report.ratio_min, trial.ratio_min);
    report.ratio_max = std::max(report.ratio_max, trial.ratio_max);
    report.trials.push_back(std::move(trial));
  }
  return report;
}

nlohmann::json to_json(const SandwichReport& report) {
  nlohmann::json j;
  j["ratio_min"] = report.ratio_min;
  j["ratio_max"] = report.ratio_max;
  auto& arr = j["trials"] = nlohmann::json::array();
  for (const auto& t : report.trials) {
    arr.push_back({{"outside", t.outside}, {"ratio_min", t.ratio_min}, {"ratio_max", t.ratio_max}});
  }
  return j;
}

}  // namespace dyson

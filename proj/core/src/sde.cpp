#include "dyson/sde.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dyson/errors.hpp"
#include "dyson/estimate.hpp"
#include "dyson/io.hpp"
#include "dyson/parallel.hpp"
#include "dyson/random.hpp"

namespace dyson {

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DomainError("integrator: dt must be positive");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw DomainError("integrator: horizon must be positive");
  if (cfg.max_halvings < 0 || cfg.max_halvings > 50) throw DomainError("integrator: max_halvings must be in [0, 50]");
  if (cfg.record_stride == 0) throw DomainError("integrator: record_stride must be positive");
}

namespace {

// Geometry the step control needs: ordering, boundary, environment.
struct Geometry {
  int dim = 1;
  bool ordered = false;  // 1D strictly increasing labels
  bool positive = false;  // Bessel half-line
  std::vector<double> env;  // flat environment coordinates (frozen-environment model)
  std::vector<double> env_sorted_1d;
};

Geometry geometry_of(const DriftModel& model, const LabeledState& x0) {
  Geometry g;
  g.dim = x0.dim();
  g.ordered = g.dim == 1;
  g.positive = std::holds_alternative<BesselModel>(model);
  if (const auto* fe = std::get_if<FrozenEnvModel>(&model)) {
    for (const auto& p : fe->env.points()) {
      for (int c = 0; c < g.dim; ++c) g.env.push_back(p[c]);
    }
    if (g.dim == 1) {
      g.env_sorted_1d = g.env;
      std::sort(g.env_sorted_1d.begin(), g.env_sorted_1d.end());
    }
  }
  return g;
}

double dist2d(const double* a, const double* b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// Distance from each particle to its nearest obstacle (neighbour, env point, 0).
void nearest(const Geometry& g, const std::vector<double>& x, std::vector<double>& out) {
  const std::size_t n = out.size();
  std::fill(out.begin(), out.end(), kUnboundedWindow);
  if (g.dim == 1) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double d = std::abs(x[j + 1] - x[j]);
      out[j] = std::min(out[j], d);
      out[j + 1] = std::min(out[j + 1], d);
    }
    if (!g.ordered) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const double d = std::abs(x[j] - x[k]);
          out[j] = std::min(out[j], d);
          out[k] = std::min(out[k], d);
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (g.positive) out[j] = std::min(out[j], x[j]);
      if (!g.env_sorted_1d.empty()) {
        const auto& e = g.env_sorted_1d;
        auto it = std::lower_bound(e.begin(), e.end(), x[j]);
        if (it != e.end()) out[j] = std::min(out[j], std::abs(*it - x[j]));
        if (it != e.begin()) out[j] = std::min(out[j], std::abs(x[j] - *(it - 1)));
      }
    }
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double d = dist2d(&x[2 * j], &x[2 * k]);
      out[j] = std::min(out[j], d);
      out[k] = std::min(out[k], d);
    }
    for (std::size_t e = 0; e < g.env.size(); e += 2) out[j] = std::min(out[j], dist2d(&x[2 * j], &g.env[e]));
  }
}

double min_gap(const Geometry& g, const std::vector<double>& x, std::size_t n) {
  double m = kUnboundedWindow;
  if (g.dim == 1) {
    if (g.ordered) {
      for (std::size_t j = 0; j + 1 < n; ++j) m = std::min(m, x[j + 1] - x[j]);
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) m = std::min(m, std::abs(x[j] - x[k]));
      }
    }
    return m;
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) m = std::min(m, dist2d(&x[2 * j], &x[2 * k]));
  }
  return m;
}

// Accept/reject geometric checks on a proposed state.
bool admissible(const Geometry& g, const std::vector<double>& old, const std::vector<double>& prop, std::size_t n) {
  for (double v : prop) {
    if (!std::isfinite(v)) return false;
  }
  if (g.positive) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(prop[j] > 0.0)) return false;
    }
  }
  if (g.dim == 1) {
    if (g.ordered) {
      for (std::size_t j = 0; j + 1 < n; ++j) {
        if (!(prop[j + 1] - prop[j] >= kCollisionTolerance)) return false;
      }
    }
    if (!g.env_sorted_1d.empty()) {
      const auto& e = g.env_sorted_1d;
      for (std::size_t j = 0; j < n; ++j) {
        const auto before = std::lower_bound(e.begin(), e.end(), old[j]) - e.begin();
        const auto it = std::lower_bound(e.begin(), e.end(), prop[j]);
        if (it - e.begin() != before) return false;
        if (it != e.end() && *it - prop[j] < kCollisionTolerance) return false;
        if (it != e.begin() && prop[j] - *(it - 1) < kCollisionTolerance) return false;
      }
    }
    return true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (dist2d(&prop[2 * j], &prop[2 * k]) < kCollisionTolerance) return false;
    }
    for (std::size_t e = 0; e < g.env.size(); e += 2) {
      if (dist2d(&prop[2 * j], &g.env[e]) < kCollisionTolerance) return false;
    }
  }
  return true;
}

void check_initial(const DriftModel& model, const LabeledState& x0) {
  if (x0.empty()) throw DomainError("integrate: empty initial state");
  const int want = model_dim(model);
  if (want != 0 && x0.dim() != want) throw DomainError("integrate: initial state has the wrong dimension");
  if (x0.dim() == 1 && x0.order() != LabelOrder::increasing) {
    throw DomainError("integrate: 1D initial state must be increasing");
  }
  if (x0.dim() == 2 && x0.order() != LabelOrder::tracked) {
    throw DomainError("integrate: 2D initial state must use tracked labels");
  }
  if (std::holds_alternative<BesselModel>(model)) {
    for (std::size_t j = 0; j < x0.size(); ++j) {
      if (!(x0[j] > 0.0)) throw DomainError("integrate: Bessel initial state must be positive");
    }
  }
  if (const auto* f = std::get_if<FiniteNModel>(&model); f && f->n != x0.size()) {
    throw DomainError("integrate: initial state size differs from N");
  }
  if (const auto* f = std::get_if<FrozenEnvModel>(&model); f && f->m != x0.size()) {
    throw DomainError("integrate: initial state size differs from m");
  }
  if (min_pair_distance(x0) < kCollisionTolerance) throw CollisionError("integrate: initial state collides");
}

}  // namespace

PathRecord integrate(const LabeledState& x0, const DriftModel& model, const IntegratorConfig& cfg,
                     std::uint64_t index) {
  validate(cfg);
  validate(model);
  check_initial(model, x0);

  const Geometry geo = geometry_of(model, x0);
  const std::size_t n = x0.size();
  const int dim = x0.dim();
  const LabelOrder order = x0.order();
  const double window = x0.window();

  const auto steps = static_cast<std::uint64_t>(std::max(1.0, std::ceil(cfg.horizon / cfg.dt - 1e-9)));
  const double h0 = cfg.horizon / static_cast<double>(steps);
  const int hmax = cfg.max_halvings;
  const std::uint64_t per_step = std::uint64_t{1} << hmax;
  if (steps > (std::uint64_t{1} << (62 - hmax))) throw DomainError("integrate: too many steps for max_halvings");
  const std::uint64_t total = steps * per_step;
  const std::uint64_t record_every = per_step * static_cast<std::uint64_t>(cfg.record_stride);
  const double tick = h0 / static_cast<double>(per_step);

  PathRecord rec;
  rec.seed = stream_seed(cfg.seed, index);
  Rng rng(rec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> x(x0.coords().begin(), x0.coords().end());
  std::vector<double> prop(x.size());
  std::vector<double> near(n);
  rec.diagnostics.substep_histogram.assign(static_cast<std::size_t>(hmax) + 1, 0);
  rec.diagnostics.min_gap = min_gap(geo, x, n);
  rec.times.push_back(0.0);
  rec.states.push_back(x0);

  auto state_of = [&](const std::vector<double>& v) { return LabeledState(v, dim, order, window); };

  std::uint64_t ticks = 0;
  int level = 0;
  while (ticks < total) {
    const std::uint64_t span = per_step >> level;
    const double h = h0 / static_cast<double>(std::uint64_t{1} << level);
    const double sh = std::sqrt(h);

    // A state passes when every drift displacement stays under half the
    // distance to its nearest obstacle.
    auto tame = [&](const std::vector<double>& v, std::vector<double>& drift) {
      try {
        drift = drift_vector(model, state_of(v));
      } catch (const CollisionError&) {
        return false;
      }
      nearest(geo, v, near);
      for (std::size_t j = 0; j < n; ++j) {
        double mag = 0.0;
        for (int c = 0; c < dim; ++c) mag += drift[j * dim + c] * drift[j * dim + c];
        mag = std::sqrt(mag);
        if (!std::isfinite(mag) || mag * h > 0.5 * near[j]) return false;
      }
      return true;
    };

    std::vector<double> b, b_prop;
    bool ok = tame(x, b);
    if (ok) {
      for (std::size_t i = 0; i < x.size(); ++i) prop[i] = x[i] + b[i] * h + sh * gauss(rng);
      // The landing state must be steppable at h too, or the path can stall
      // next to a near-collision that no admissible step size resolves.
      ok = admissible(geo, x, prop, n) && tame(prop, b_prop);
    }
    if (!ok) {
      ++rec.diagnostics.rejections;
      if (++level > hmax) {
        throw IntegrationError("integrate: step control exhausted " + std::to_string(hmax) + " halvings at t = " +
                                   format_double(static_cast<double>(ticks) * tick),
                               static_cast<double>(ticks) * tick, x);
      }
      continue;
    }

    x.swap(prop);
    ticks += span;
    ++rec.diagnostics.substep_histogram[static_cast<std::size_t>(level)];
    rec.diagnostics.min_gap = std::min(rec.diagnostics.min_gap, min_gap(geo, x, n));
    if (level > 0 && ticks % (span << 1) == 0) --level;
    if (ticks % record_every == 0 || ticks == total) {
      rec.times.push_back(ticks == total ? cfg.horizon : static_cast<double>(ticks) * tick);
      rec.states.push_back(state_of(x));
    }
  }
  return rec;
}

std::vector<PathRecord> integrate_ensemble(const std::vector<LabeledState>& x0, const DriftModel& model,
                                           const IntegratorConfig& cfg, unsigned threads) {
  std::vector<PathRecord> out(x0.size());
  parallel_for(x0.size(), threads, [&](std::size_t i) { out[i] = integrate(x0[i], model, cfg, i); });
  return out;
}

std::string to_csv(const PathRecord& path) {
  std::ostringstream os;
  os << 't';
  if (!path.states.empty()) {
    const auto& s = path.states.front();
    for (std::size_t j = 1; j <= s.size(); ++j) {
      os << ",x" << j;
      if (s.dim() == 2) os << ",y" << j;
    }
  }
  os << '\n';
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    os << format_double(path.times[i]);
    for (double v : path.states[i].coords()) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

nlohmann::json summary_json(const PathRecord& path, const IntegratorConfig& cfg) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = {{"dt", cfg.dt},
                 {"max_halvings", cfg.max_halvings},
                 {"horizon", cfg.horizon},
                 {"scheme", "euler_maruyama"},
                 {"seed", cfg.seed},
                 {"record_stride", cfg.record_stride}};
  j["stream_seed"] = path.seed;
  j["records"] = path.times.size();
  j["diagnostics"] = {{"min_gap", std::isfinite(path.diagnostics.min_gap) ? nlohmann::json(path.diagnostics.min_gap)
                                                                          : nlohmann::json(nullptr)},
                      {"substep_histogram", path.diagnostics.substep_histogram},
                      {"rejections", path.diagnostics.rejections}};
  return j;
}

LabeledState edge_rescale(const LabeledState& x, std::size_t n) {
  if (n == 0) throw DomainError("edge_rescale: N must be positive");
  if (x.dim() != 1) throw DomainError("edge_rescale: 1D state required");
  const double s = std::pow(static_cast<double>(n), 1.0 / 6.0);
  const double e = 2.0 * std::sqrt(static_cast<double>(n));
  std::vector<double> y(x.coords().begin(), x.coords().end());
  for (double& v : y) v = s * (v - e);
  return LabeledState(std::move(y), 1, x.order());
}

LabeledState edge_unscale(const LabeledState& y, std::size_t n) {
  if (n == 0) throw DomainError("edge_unscale: N must be positive");
  if (y.dim() != 1) throw DomainError("edge_unscale: 1D state required");
  const double s = std::pow(static_cast<double>(n), 1.0 / 6.0);
  const double e = 2.0 * std::sqrt(static_cast<double>(n));
  std::vector<double> x(y.coords().begin(), y.coords().end());
  for (double& v : x) v = v / s + e;
  return LabeledState(std::move(x), 1, y.order());
}

namespace {

struct Observables {
  std::vector<double> sum_sq, max, mean_gap;
};

Observables observe(const std::vector<LabeledState>& states) {
  Observables o;
  for (const auto& s : states) {
    const auto c = s.coords();
    double sq = 0.0;
    for (double v : c) sq += v * v;
    o.sum_sq.push_back(sq);
    o.max.push_back(*std::max_element(c.begin(), c.end()));
    o.mean_gap.push_back(c.size() > 1 ? (c.back() - c.front()) / static_cast<double>(c.size() - 1) : 0.0);
  }
  return o;
}

MeanSe variance_se(std::span<const double> v) {
  const MeanSe m = mean_se(v);
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - m.mean) * (v[i] - m.mean);
  return mean_se(dev);
}

}  // namespace

StationarityReport stationarity_run(std::size_t n, double beta, const IntegratorConfig& cfg,
                                    const std::vector<LabeledState>& initial,
                                    const std::vector<LabeledState>& reference, unsigned threads) {
  if (reference.empty()) throw DomainError("stationarity_run: empty reference sample");
  if (initial.empty()) throw DomainError("stationarity_run: no initial states");
  for (const auto& s : initial) {
    if (s.size() != n) throw DomainError("stationarity_run: initial state size differs from N");
  }
  std::vector<LabeledState> final_states;
  if (cfg.horizon == 0.0) {
    final_states = initial;
  } else {
    const DriftModel model = FiniteNModel{beta, n, DysonModel::ou};
    auto paths = integrate_ensemble(initial, model, cfg, threads);
    final_states.reserve(paths.size());
    for (auto& p : paths) final_states.push_back(std::move(p.states.back()));
  }
  const Observables run = observe(final_states);
  const Observables ref = observe(reference);

  StationarityReport rep;
  rep.paths = final_states.size();
  auto add = [&](const char* name, MeanSe a, MeanSe b) {
    rep.stats.push_back({name, a.mean, a.se, b.mean, b.se, z_score(a, b)});
  };
  add("sum_sq", mean_se(run.sum_sq), mean_se(ref.sum_sq));
  add("max", mean_se(run.max), mean_se(ref.max));
  add("mean_gap", mean_se(run.mean_gap), mean_se(ref.mean_gap));
  add("var_sum_sq", variance_se(run.sum_sq), variance_se(ref.sum_sq));
  return rep;
}

StationarityReport stationarity_run(std::size_t n, double beta, const IntegratorConfig& cfg,
                                    const std::vector<LabeledState>& reference, unsigned threads) {
  return stationarity_run(n, beta, cfg, reference, reference, threads);
}

nlohmann::json to_json(const StationarityReport& report) {
  nlohmann::json j;
  j["paths"] = report.paths;
  auto& arr = j["stats"] = nlohmann::json::array();
  for (const auto& s : report.stats) {
    arr.push_back({{"name", s.name},
                   {"run_mean", s.run_mean},
                   {"run_se", s.run_se},
                   {"ref_mean", s.ref_mean},
                   {"ref_se", s.ref_se},
                   {"z", s.z}});
  }
  return j;
}

}  // namespace dyson

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "artifacts.hpp"
#include "dyson/drift.hpp"
#include "dyson/errors.hpp"
#include "dyson/experiments.hpp"
#include "dyson/io.hpp"
#include "dyson/kernels.hpp"
#include "dyson/parallel.hpp"
#include "dyson/random.hpp"
#include "dyson/sampling.hpp"
#include "dyson/sde.hpp"
#include "dyson/stats.hpp"

#ifndef DYSONLAB_VERSION
#define DYSONLAB_VERSION "0.0.0"
#endif

namespace dysoncli {

namespace {

using dyson::ValidationError;
using nlohmann::json;
using std::numbers::pi;

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

void positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be positive (got " + dyson::format_double(v) + ")");
}

void at_least(std::size_t v, std::size_t lo, const std::string& field) {
  require(v >= lo, field, "must be at least " + std::to_string(lo) + " (got " + std::to_string(v) + ")");
}

void one_of(const std::string& v, std::initializer_list<const char*> allowed, const std::string& field) {
  std::string list;
  for (const char* a : allowed) {
    if (v == a) return;
    list += list.empty() ? a : std::string(", ") + a;
  }
  throw ValidationError(field, "unknown value '" + v + "' (expected one of " + list + ")");
}

std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), field, "cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// Every option of the subcommand with its effective value.
json echo(const CLI::App& app) {
  json j = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string& name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_expected_max() > 1 || opt->get_positional()) {
        j[name] = res;
      } else {
        j[name] = res.empty() ? std::string("true") : res.front();
      }
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

std::string ini_of(const std::string& section, const json& spec) {
  std::string out = "[" + section + "]\n";
  for (const auto& [k, v] : spec.items()) {
    std::string val;
    if (v.is_array()) {
      for (const auto& e : v) val += (val.empty() ? "" : ",") + e.get<std::string>();
    } else {
      val = v.get<std::string>();
    }
    out += k + "=" + val + "\n";
  }
  return out;
}

struct Global {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = "dysonlab-out";
};

struct Run {
  const Global& g;
  ArtifactWriter& files;
  json info = json::object();
  std::ostream& out;
};

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  std::string model = "finite-n";
  std::string kind = "plain";
  double beta = 2.0;
  std::size_t n = 8;
  double alpha = 1.0;
  double radius = 20.0;
  std::string init = "lattice";
  std::string init_file;
  double dt = 1e-3;
  double horizon = 1.0;
  int max_halvings = 40;
  std::size_t record_stride = 1;
  std::size_t paths = 1;
};

// Deterministic start at the limiting density of each model.
dyson::LabeledState lattice(const SimulateOpts& o) {
  std::vector<double> xs;
  const double r = o.radius;
  if (o.model == "finite-n") {
    for (std::size_t j = 0; j < o.n; ++j) xs.push_back(static_cast<double>(j) - 0.5 * static_cast<double>(o.n - 1));
    return dyson::LabeledState::increasing(xs);
  }
  if (o.model == "bulk") {
    for (double x = -std::floor(r / pi) * pi - 0.5 * pi; x < r; x += pi) {
      if (std::abs(x) < r) xs.push_back(x);
    }
  } else if (o.model == "soft-edge") {
    for (int k = 1;; ++k) {
      const double x = -std::pow(1.5 * pi * (k - 0.25), 2.0 / 3.0);
      if (-x >= r) break;
      xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
  } else if (o.model == "bessel") {
    for (int k = 1;; ++k) {
      const double x = std::pow(pi * (k - 0.5), 2.0);
      if (x >= r) break;
      xs.push_back(x);
    }
  } else {
    std::vector<double> c;
    const double s = std::sqrt(pi);
    const int m = static_cast<int>(std::floor(r / s));
    for (int i = -m; i <= m; ++i) {
      for (int k = -m; k <= m; ++k) {
        const double x = (i + 0.5) * s, y = (k + 0.5) * s;
        if (std::hypot(x, y) < r) {
          c.push_back(x);
          c.push_back(y);
        }
      }
    }
    require(!c.empty(), "radius", "too small for any lattice point");
    return dyson::LabeledState(c, 2, dyson::LabelOrder::tracked, r);
  }
  require(xs.size() >= 1, "radius", "too small for any lattice point");
  return dyson::LabeledState::increasing(xs, r);
}

bool dim_matches(const dyson::DriftModel& m, const dyson::LabeledState& s) {
  const int d = dyson::model_dim(m);
  return d == 0 || d == s.dim();
}

dyson::DriftModel drift_model(const SimulateOpts& o, std::size_t n) {
  if (o.model == "finite-n") {
    return dyson::FiniteNModel{o.beta, n, o.kind == "ou" ? dyson::DysonModel::ou : dyson::DysonModel::plain};
  }
  if (o.model == "bulk") return dyson::BulkModel{o.beta, o.radius};
  if (o.model == "soft-edge") return dyson::SoftEdgeModel{o.beta, o.radius};
  if (o.model == "bessel") return dyson::BesselModel{o.alpha, o.radius};
  return dyson::GinibreModel{o.radius};
}

void simulate(const SimulateOpts& o, Run& run) {
  one_of(o.model, {"finite-n", "bulk", "soft-edge", "bessel", "ginibre"}, "model");
  one_of(o.kind, {"plain", "ou"}, "kind");
  one_of(o.init, {"lattice", "gibbs", "file"}, "init");
  positive(o.beta, "beta");
  positive(o.radius, "radius");
  positive(o.dt, "dt");
  positive(o.horizon, "horizon");
  require(o.alpha >= 1.0, "alpha", "must be at least 1");
  require(o.max_halvings >= 0 && o.max_halvings <= 50, "max-halvings", "must be in [0, 50]");
  at_least(o.record_stride, 1, "record-stride");
  at_least(o.paths, 1, "paths");
  if (o.model == "finite-n") at_least(o.n, 1, "n");
  require(o.init != "gibbs" || o.model == "finite-n", "init", "gibbs starts need model finite-n");

  std::vector<dyson::LabeledState> starts;
  if (o.init == "lattice") {
    starts.assign(o.paths, lattice(o));
  } else if (o.init == "gibbs") {
    require(o.n >= 2, "n", "gibbs starts need n >= 2");
    dyson::McmcConfig m;
    m.thinning = 100;
    m.steps = m.burn_in + m.thinning * o.paths;
    m.seed = dyson::stream_seed(run.g.seed, 1'000'003);
    starts = dyson::mcmc_gibbs(o.n, o.beta, m).samples;
    starts.resize(o.paths);
  } else {
    require(!o.init_file.empty(), "init-file", "required with init = file");
    const auto cfg = dyson::configuration_from_csv(read_file(o.init_file, "init-file"));
    const auto order = cfg.dim() == 2 ? dyson::LabelOrder::tracked : dyson::LabelOrder::increasing;
    const double w = o.model == "finite-n" ? dyson::kUnboundedWindow : o.radius;
    const auto st = dyson::label(cfg, order);
    starts.assign(o.paths, dyson::LabeledState({st.coords().begin(), st.coords().end()}, st.dim(), order, w));
  }
  const std::size_t n = starts.front().size();
  const auto model = drift_model(o, n);
  require(dim_matches(model, starts.front()), "init-file", "state dimension does not match the model");

  dyson::IntegratorConfig cfg;
  cfg.dt = o.dt;
  cfg.horizon = o.horizon;
  cfg.max_halvings = o.max_halvings;
  cfg.record_stride = o.record_stride;
  cfg.seed = run.g.seed;

  std::vector<dyson::PathRecord> recs(o.paths);
  std::vector<std::string> failures(o.paths);
  dyson::parallel_for(o.paths, run.g.threads, [&](std::size_t i) {
    try {
      recs[i] = dyson::integrate(starts[i], model, cfg, i);
    } catch (const dyson::IntegrationError& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < o.paths; ++i) {
    if (!failures[i].empty()) throw std::runtime_error("path " + std::to_string(i) + ": " + failures[i]);
  }

  std::string paths = "path,";
  std::string diag = "path,min_gap,rejections";
  for (int l = 0; l <= o.max_halvings; ++l) diag += ",level_" + std::to_string(l);
  diag += '\n';
  for (std::size_t i = 0; i < o.paths; ++i) {
    const std::string csv = dyson::to_csv(recs[i]);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    if (i == 0) paths += line + '\n';
    while (std::getline(is, line)) paths += std::to_string(i) + ',' + line + '\n';
    const auto& d = recs[i].diagnostics;
    diag += std::to_string(i) + ',' + dyson::format_double(d.min_gap) + ',' + std::to_string(d.rejections);
    for (auto c : d.substep_histogram) diag += ',' + std::to_string(c);
    diag += '\n';
  }
  run.files.write("paths.csv", paths);
  run.files.write("diagnostics.csv", diag);
  run.info["model"] = dyson::model_name(model);
  run.info["particles"] = n;
  run.out << "simulated " << o.paths << " path(s) of " << n << " particles to t = " << o.horizon << '\n';
}

// -------------------------------------------------------------- sample-gibbs

struct GibbsOpts {
  std::string method = "mcmc";
  std::size_t n = 8;
  double beta = 2.0;
  std::size_t count = 100;
  std::string scaling = "gibbs-bulk";
  std::size_t chains = 1;
  std::size_t burn_in = 2000;
  std::size_t thinning = 10;
  double proposal_scale = 1.0;
  bool auto_tune = true;
};

void sample_gibbs(const GibbsOpts& o, Run& run) {
  one_of(o.method, {"mcmc", "tridiag"}, "method");
  one_of(o.scaling, {"gibbs-bulk", "hermite"}, "scaling");
  positive(o.beta, "beta");
  at_least(o.n, o.method == "mcmc" ? 2 : 1, "n");
  at_least(o.count, 1, "count");
  at_least(o.chains, 1, "chains");
  at_least(o.thinning, 1, "thinning");
  positive(o.proposal_scale, "proposal-scale");

  std::vector<dyson::LabeledState> states;
  if (o.method == "mcmc") {
    require(o.scaling == "gibbs-bulk", "scaling", "the Metropolis sampler targets the gibbs-bulk scaling");
    dyson::McmcConfig m;
    m.burn_in = o.burn_in;
    m.thinning = o.thinning;
    m.steps = o.burn_in + o.thinning * ((o.count + o.chains - 1) / o.chains);
    m.proposal_scale = o.proposal_scale;
    m.auto_tune = o.auto_tune;
    m.seed = run.g.seed;
    auto res = dyson::mcmc_gibbs_chains(o.n, o.beta, m, o.chains, run.g.threads);
    states = std::move(res.samples);
    states.resize(std::min(states.size(), o.count));
    run.info["acceptance_rate"] = res.acceptance_rate;
    run.info["proposal_scale"] = res.proposal_scale;
  } else {
    const auto sc = o.scaling == "hermite" ? dyson::BetaScaling::hermite : dyson::BetaScaling::gibbs_bulk;
    states = dyson::tridiag_beta_ensemble(o.n, o.beta, o.count, run.g.seed, sc, run.g.threads);
  }
  std::vector<dyson::Configuration> cfgs;
  for (const auto& s : states) cfgs.push_back(dyson::unlabel(s));
  run.files.write("samples.csv", dyson::samples_to_csv(cfgs));
  run.out << "wrote " << cfgs.size() << " sample(s) of N = " << o.n << '\n';
}

// ---------------------------------------------------------------- sample-dpp

struct DppOpts {
  std::string kernel = "sine";
  double alpha = 1.0;
  dyson::DppSampleConfig cfg;
  std::size_t count = 100;
};

dyson::KernelModel sampler_kernel(const std::string& name, double alpha) {
  if (name == "sine") return dyson::SineKernel{};
  if (name == "airy") return dyson::AiryKernel{};
  if (name == "bessel") return dyson::BesselKernel{alpha};
  return dyson::GinibreKernel{};
}

void sample_dpp(DppOpts o, Run& run) {
  one_of(o.kernel, {"sine", "airy", "bessel", "ginibre"}, "kernel");
  const bool planar = o.kernel == "ginibre";
  require(o.alpha > -1.0, "alpha", "must exceed -1");
  require(o.cfg.b > o.cfg.a, "b", "must exceed a");
  require(o.kernel != "bessel" || o.cfg.a >= 0.0, "a", "must be nonnegative for the Bessel kernel");
  at_least(o.cfg.panels, 1, "panels");
  at_least(o.cfg.nodes_per_panel, 1, "nodes-per-panel");
  positive(o.cfg.radius, "radius");
  at_least(o.cfg.radial_nodes, 1, "radial-nodes");
  at_least(o.cfg.angular_nodes, 1, "angular-nodes");
  require(o.cfg.tolerance >= 0.0, "tolerance", "must be nonnegative");
  at_least(o.count, 1, "count");
  o.cfg.seed = run.g.seed;
  dyson::validate(o.cfg, planar);

  const dyson::DppSampler sampler(sampler_kernel(o.kernel, o.alpha), o.cfg);
  const auto samples = sampler.samples(o.count, run.g.threads);
  std::string spec = "k,lambda\n";
  for (std::size_t k = 0; k < sampler.spectrum().size(); ++k) {
    spec += std::to_string(k) + ',' + dyson::format_double(sampler.spectrum()[k]) + '\n';
  }
  run.files.write("samples.csv", dyson::samples_to_csv(samples));
  run.files.write("spectrum.csv", spec);
  run.info["sampler"] = sampler.metadata();
  run.out << "wrote " << samples.size() << " sample(s); expected count " << sampler.expected_count() << '\n';
}

// --------------------------------------------------------------- kernel-eval

struct KernelOpts {
  std::string kernel = "sine";
  std::vector<double> mesh;
  double from = -1.0;
  double to = 1.0;
  std::size_t points = 0;
  double alpha = 1.0;
  int pearcey_nodes = 160;
  std::size_t tacnode_n = 64;
  double tacnode_length = 12.0;
};

void kernel_eval(const KernelOpts& o, Run& run) {
  one_of(o.kernel, {"sine", "airy", "bessel", "ginibre", "pearcey", "tacnode"}, "kernel");
  std::vector<double> mesh = o.mesh;
  if (mesh.empty()) {
    require(o.points >= 1, "mesh", "give a mesh or points >= 1");
    require(o.to > o.from || o.points == 1, "to", "must exceed from");
    for (std::size_t i = 0; i < o.points; ++i) {
      mesh.push_back(o.points == 1 ? o.from
                                   : o.from + (o.to - o.from) * static_cast<double>(i) /
                                                  static_cast<double>(o.points - 1));
    }
  } else {
    require(o.points == 0, "points", "give either a mesh or points, not both");
  }
  for (double x : mesh) require(std::isfinite(x), "mesh", "values must be finite");
  require(o.alpha > -1.0, "alpha", "must exceed -1");
  require(o.pearcey_nodes >= 16, "pearcey-nodes", "must be at least 16");
  at_least(o.tacnode_n, 2, "tacnode-n");
  positive(o.tacnode_length, "tacnode-length");

  dyson::KernelModel k;
  if (o.kernel == "pearcey") {
    k = dyson::PearceyKernel{dyson::PearceyOptions{o.pearcey_nodes}};
  } else if (o.kernel == "tacnode") {
    k = dyson::TacnodeKernel::make(o.tacnode_n, o.tacnode_length);
  } else {
    k = sampler_kernel(o.kernel, o.alpha);
  }
  if (o.kernel == "bessel") {
    for (double x : mesh) require(x >= 0.0, "mesh", "Bessel kernel needs nonnegative points");
  }
  // Ginibre points are taken on the real axis.
  std::vector<dyson::Point> pts;
  for (double x : mesh) pts.push_back(o.kernel == "ginibre" ? dyson::Point(x, 0.0) : dyson::Point(x));
  const Eigen::MatrixXcd m = dyson::kernel_matrix(k, pts);
  auto grid = [&](auto part) {
    std::string s;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + dyson::format_double(part(m(i, j)));
      s += '\n';
    }
    return s;
  };
  std::string mesh_csv = "x\n";
  for (double x : mesh) mesh_csv += dyson::format_double(x) + '\n';
  run.files.write("kernel.csv", grid([](std::complex<double> z) { return z.real(); }));
  if (o.kernel == "ginibre") run.files.write("kernel_imag.csv", grid([](std::complex<double> z) { return z.imag(); }));
  run.files.write("mesh.csv", mesh_csv);
  run.info["kernel"] = dyson::kernel_name(k);
  run.info["hermitian"] = dyson::kernel_hermitian(k);
  run.out << "evaluated " << dyson::kernel_name(k) << " on " << mesh.size() << " mesh points\n";
}

// --------------------------------------------------------------------- audit

struct AuditOpts {
  std::string kind = "A2";
  std::string density = "constant";
  double rho = 1.0 / pi;
  int dim = 1;
  double t = 1.0;
  double big_r = 1.0;
  double c = 1.0;
  double r = 1.0;
  std::vector<double> r_grid{1, 2, 5, 10, 20, 50, 100};
  double cutoff_multiplier = 1.0;
};

void audit(const AuditOpts& o, Run& run) {
  one_of(o.kind, {"A2", "A5"}, "kind");
  one_of(o.density, {"constant", "soft-edge"}, "density");
  require(std::isfinite(o.rho) && o.rho >= 0.0, "rho", "must be nonnegative");
  require(o.dim == 1 || o.dim == 2, "dim", "must be 1 or 2");
  require(o.density == "constant" || o.dim == 1, "dim", "the soft-edge density is one-dimensional");
  positive(o.t, "t");
  require(std::isfinite(o.big_r) && o.big_r >= 0.0, "big-r", "must be nonnegative");
  positive(o.c, "c");
  require(std::isfinite(o.r) && o.r >= 0.0, "r", "must be nonnegative");
  positive(o.cutoff_multiplier, "cutoff-multiplier");
  for (double v : o.r_grid) require(std::isfinite(v) && v >= 0.0, "r-grid", "values must be nonnegative");

  dyson::Density rho;
  if (o.density == "constant") {
    rho = [v = o.rho](double) { return v; };
  } else {
    rho = [](double x) { return x < 0.0 ? std::sqrt(-x) / pi : 0.0; };
  }
  json j;
  if (o.kind == "A2") {
    require(!o.r_grid.empty(), "r-grid", "must not be empty");
    const auto rep = dyson::audit_A2(rho, o.t, o.big_r, o.r_grid, o.dim);
    run.files.write("audit.csv", dyson::to_csv(rep));
    j = dyson::to_json(rep);
  } else {
    const auto a = dyson::audit_A5(rho, o.r, o.t, o.c, o.cutoff_multiplier, o.dim);
    std::string csv = "value,cutoff,tail_bound,divergent\n";
    csv += dyson::format_double(a.value) + ',' + dyson::format_double(a.cutoff) + ',' +
           dyson::format_double(a.tail_bound) + ',' + (a.divergent ? "1" : "0") + '\n';
    run.files.write("audit.csv", csv);
    j = {{"kind", "A5"}, {"value", a.value}, {"cutoff", a.cutoff}, {"tail_bound", a.tail_bound},
         {"divergent", a.divergent}};
  }
  j["format_version"] = dyson::kFormatVersion;
  run.files.write("audit.json", j.dump(2) + '\n');
  run.out << o.kind << " audit written\n";
}

// --------------------------------------------------------------------- stats

struct StatsOpts {
  std::string input;
  std::string kind = "correlation";
  int order = 1;
  double a = 0.0;
  double b = 10.0 * pi;
  std::size_t bins = 10;
  double fraction = 0.5;
  std::string reference = "wigner2";
  std::size_t n = 0;
  double radius = 0.0;
};

void stats(const StatsOpts& o, Run& run) {
  one_of(o.kind, {"correlation", "spacing", "semicircle"}, "kind");
  require(!o.input.empty(), "input", "a samples CSV is required");
  const auto samples = dyson::samples_from_csv(read_file(o.input, "input"));
  require(!samples.empty(), "input", "no samples found");
  json j;
  if (o.kind == "correlation") {
    require(o.order == 1 || o.order == 2, "order", "must be 1 or 2");
    require(o.b > o.a, "b", "must exceed a");
    at_least(o.bins, 1, "bins");
    require(samples.size() >= 100, "input", "correlation estimates need at least 100 samples");
    const auto est = dyson::empirical_correlation(samples, o.order, {o.a, o.b, o.bins});
    run.files.write("stats.csv", dyson::to_csv(est));
    j = dyson::to_json(est);
  } else {
    std::vector<dyson::LabeledState> states;
    for (const auto& s : samples) {
      require(s.dim() == 1, "input", "spacing and semicircle statistics need 1D samples");
      states.push_back(dyson::label(s, dyson::LabelOrder::increasing));
    }
    if (o.kind == "spacing") {
      one_of(o.reference, {"wigner2", "poisson"}, "reference");
      require(o.fraction > 0.0 && o.fraction <= 1.0, "fraction", "must be in (0, 1]");
      const auto [lo, hi] = dyson::central_window(states, o.fraction);
      const dyson::Cdf ref = o.reference == "wigner2" ? dyson::Cdf(dyson::wigner_surmise_beta2_cdf)
                                                      : dyson::Cdf(dyson::exponential_cdf);
      const auto sp = dyson::spacing_distribution(states, lo, hi, ref);
      std::string csv = "bin_center,density\n";
      for (std::size_t i = 0; i < sp.histogram.size(); ++i) {
        csv += dyson::format_double((static_cast<double>(i) + 0.5) * 0.1) + ',' + dyson::format_double(sp.histogram[i]) +
               '\n';
      }
      run.files.write("stats.csv", csv);
      j = {{"kind", "spacing"}, {"ks", sp.ks}, {"spacings", sp.spacings.size()}, {"window", {lo, hi}},
           {"reference", o.reference}};
    } else {
      require((o.n > 0) != (o.radius > 0.0), "n", "give exactly one of n and radius");
      const double ks = o.n > 0 ? dyson::semicircle_compare(states, o.n)
                                : dyson::semicircle_compare_radius(states, o.radius);
      const double radius = o.n > 0 ? 2.0 * std::sqrt(static_cast<double>(o.n)) : o.radius;
      run.files.write("stats.csv", "radius,ks\n" + dyson::format_double(radius) + ',' + dyson::format_double(ks) + '\n');
      j = {{"kind", "semicircle"}, {"radius", radius}, {"ks", ks}};
    }
  }
  j["format_version"] = dyson::kFormatVersion;
  run.files.write("stats.json", j.dump(2) + '\n');
  run.out << o.kind << " statistics written for " << samples.size() << " sample(s)\n";
}

// ---------------------------------------------------------------- experiment

struct ExperimentOpts {
  std::vector<std::string> ids;
  double size = 1.0;
};

void experiment(const ExperimentOpts& o, Run& run) {
  positive(o.size, "size");
  const auto all = dyson::criterion_ids();
  std::vector<std::string> ids = o.ids.empty() ? all : o.ids;
  for (const auto& id : ids) {
    require(std::find(all.begin(), all.end(), id) != all.end(), "ids", "unknown criterion '" + id + "'");
  }
  dyson::ExperimentOptions eo;
  eo.seed = run.g.seed;
  eo.threads = run.g.threads;
  eo.size = o.size;
  std::string csv = "id,pass,summary\n";
  json results = json::array();
  json timing = json::object();
  std::size_t passed = 0;
  for (const auto& id : ids) {
    const auto r = dyson::run_criterion(id, eo);
    run.out << r.id << (r.pass ? " PASS " : " FAIL ") << r.summary << '\n';
    passed += r.pass ? 1 : 0;
    std::string summary = r.summary;
    std::replace(summary.begin(), summary.end(), '"', '\'');
    csv += r.id + ',' + (r.pass ? "1" : "0") + ",\"" + summary + "\"\n";
    auto j = dyson::to_json(r);
    j.erase("seconds");
    results.push_back(j);
    timing[r.id] = r.seconds;
  }
  run.files.write("results.csv", csv);
  run.files.write("results.json", json{{"format_version", dyson::kFormatVersion}, {"results", results}}.dump(2) + '\n');
  run.info["criterion_seconds"] = timing;
  run.info["passed"] = passed;
  run.info["total"] = ids.size();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dysonlab: interacting Brownian motions, log-gases and determinantal point processes"};
  app.name(args.empty() ? "dysonlab" : args.front());
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file of key=value lines, one [section] per subcommand");
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  if (const char* env = std::getenv("DYSONLAB_OUT"); env && *env) g.out = env;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--out", g.out, "output directory (default from DYSONLAB_OUT)");

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "integrate truncated ISDE or finite-N Dyson paths");
  sim->add_option("--model", so.model, "finite-n, bulk, soft-edge, bessel or ginibre");
  sim->add_option("--kind", so.kind, "finite-n drift: plain or ou");
  sim->add_option("--beta", so.beta);
  sim->add_option("--n", so.n, "particles (finite-n)");
  sim->add_option("--alpha", so.alpha, "Bessel index");
  sim->add_option("--radius", so.radius, "truncation radius and lattice window");
  sim->add_option("--init", so.init, "lattice, gibbs or file");
  sim->add_option("--init-file", so.init_file, "configuration CSV for init = file");
  sim->add_option("--dt", so.dt);
  sim->add_option("--horizon", so.horizon);
  sim->add_option("--max-halvings", so.max_halvings);
  sim->add_option("--record-stride", so.record_stride);
  sim->add_option("--paths", so.paths);

  GibbsOpts go;
  auto* gib = app.add_subcommand("sample-gibbs", "finite-N log-gas samples (Metropolis or tridiagonal)");
  gib->add_option("--method", go.method, "mcmc or tridiag");
  gib->add_option("--n", go.n);
  gib->add_option("--beta", go.beta);
  gib->add_option("--count", go.count);
  gib->add_option("--scaling", go.scaling, "gibbs-bulk or hermite (tridiag)");
  gib->add_option("--chains", go.chains);
  gib->add_option("--burn-in", go.burn_in);
  gib->add_option("--thinning", go.thinning);
  gib->add_option("--proposal-scale", go.proposal_scale);
  gib->add_option("--auto-tune", go.auto_tune);

  DppOpts dpo;
  auto* dpp = app.add_subcommand("sample-dpp", "determinantal samples on a quadrature grid");
  dpp->add_option("--kernel", dpo.kernel, "sine, airy, bessel or ginibre");
  dpp->add_option("--alpha", dpo.alpha);
  dpp->add_option("--a", dpo.cfg.a);
  dpp->add_option("--b", dpo.cfg.b);
  dpp->add_option("--panels", dpo.cfg.panels);
  dpp->add_option("--nodes-per-panel", dpo.cfg.nodes_per_panel);
  dpp->add_option("--radius", dpo.cfg.radius, "Ginibre disk radius");
  dpp->add_option("--radial-nodes", dpo.cfg.radial_nodes);
  dpp->add_option("--angular-nodes", dpo.cfg.angular_nodes);
  dpp->add_option("--tolerance", dpo.cfg.tolerance);
  dpp->add_option("--count", dpo.count);

  KernelOpts ko;
  auto* ker = app.add_subcommand("kernel-eval", "kernel matrix over a mesh");
  ker->add_option("kernel", ko.kernel, "sine, airy, bessel, ginibre, pearcey or tacnode");
  ker->add_option("--mesh", ko.mesh, "comma-separated points")->delimiter(',');
  ker->add_option("--from", ko.from);
  ker->add_option("--to", ko.to);
  ker->add_option("--points", ko.points, "uniform mesh size on [from, to]");
  ker->add_option("--alpha", ko.alpha);
  ker->add_option("--pearcey-nodes", ko.pearcey_nodes);
  ker->add_option("--tacnode-n", ko.tacnode_n);
  ker->add_option("--tacnode-length", ko.tacnode_length);

  AuditOpts ao;
  auto* aud = app.add_subcommand("audit", "integrability audits of a one-point density");
  aud->add_option("--kind", ao.kind, "A2 or A5");
  aud->add_option("--density", ao.density, "constant or soft-edge");
  aud->add_option("--rho", ao.rho, "value of the constant density");
  aud->add_option("--dim", ao.dim);
  aud->add_option("--t", ao.t);
  aud->add_option("--big-r", ao.big_r);
  aud->add_option("--c", ao.c);
  aud->add_option("--r", ao.r, "A5 radius");
  aud->add_option("--r-grid", ao.r_grid, "A2 radii")->delimiter(',');
  aud->add_option("--cutoff-multiplier", ao.cutoff_multiplier);

  StatsOpts sto;
  auto* sta = app.add_subcommand("stats", "statistics of stored samples");
  sta->add_option("--input", sto.input, "samples CSV");
  sta->add_option("--kind", sto.kind, "correlation, spacing or semicircle");
  sta->add_option("--order", sto.order);
  sta->add_option("--a", sto.a);
  sta->add_option("--b", sto.b);
  sta->add_option("--bins", sto.bins);
  sta->add_option("--fraction", sto.fraction, "central fraction of points for spacings");
  sta->add_option("--reference", sto.reference, "wigner2 or poisson");
  sta->add_option("--n", sto.n, "semicircle radius 2 sqrt(n)");
  sta->add_option("--radius", sto.radius, "explicit semicircle radius");

  ExperimentOpts eo;
  auto* exp = app.add_subcommand("experiment", "named end-to-end checks AC1 ... AC12");
  exp->add_option("ids", eo.ids, "criteria to run (default: all)");
  exp->add_option("--size", eo.size, "multiplier on sample and path counts");

  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ArtifactWriter files(g.out);
    Run run{g, files, json::object(), out};
    const std::string name = sub->get_name();
    if (name == "simulate") simulate(so, run);
    else if (name == "sample-gibbs") sample_gibbs(go, run);
    else if (name == "sample-dpp") sample_dpp(dpo, run);
    else if (name == "kernel-eval") kernel_eval(ko, run);
    else if (name == "audit") audit(ao, run);
    else if (name == "stats") stats(sto, run);
    else experiment(eo, run);

    const json spec = echo(*sub);
    json manifest{{"format_version", dyson::kFormatVersion},
                  {"tool", "dysonlab"},
                  {"version", DYSONLAB_VERSION},
                  {"subcommand", name},
                  {"seed", g.seed},
                  {"threads", g.threads},
                  {"spec", spec},
                  {"config", "seed=" + std::to_string(g.seed) + "\n" + ini_of(name, spec)},
                  {"versions",
                   {{"dysonlab", DYSONLAB_VERSION},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
                    {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                    {"cli11", CLI11_VERSION},
                    {"compiler", __VERSION__}}},
                  {"results", run.info}};
    json listed = json::array();
    for (const auto& f : files.files()) listed.push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    manifest["files"] = listed;
    manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    files.write("manifest.json", manifest.dump(2) + '\n');
    files.commit();
    return 0;
  } catch (const ValidationError& e) {
    err << "error: invalid " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dysoncli

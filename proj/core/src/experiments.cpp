#include "dyson/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "dyson/drift.hpp"
#include "dyson/errors.hpp"
#include "dyson/estimate.hpp"
#include "dyson/kernels.hpp"
#include "dyson/parallel.hpp"
#include "dyson/potentials.hpp"
#include "dyson/quadrature.hpp"
#include "dyson/random.hpp"
#include "dyson/sampling.hpp"
#include "dyson/sde.hpp"
#include "dyson/special.hpp"
#include "dyson/stats.hpp"

namespace dyson {

namespace {

using std::numbers::pi;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::size_t scaled(std::size_t full, double size, std::size_t floor) {
  return std::max(floor, static_cast<std::size_t>(std::llround(static_cast<double>(full) * size)));
}

// Extended-precision log-density used as the finite-difference oracle: drift
// components can be 1e-4 while single terms are O(1), below what a difference
// of double sums resolves.
long double log_density_ld(const std::vector<double>& x, double beta, std::size_t n, std::size_t j, double dx) {
  long double lh = 0.0L, sq = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double xi = static_cast<long double>(x[i]) + (i == j ? static_cast<long double>(dx) : 0.0L);
    sq += xi * xi;
    for (std::size_t k = i + 1; k < n; ++k) {
      const long double xk = static_cast<long double>(x[k]) + (k == j ? static_cast<long double>(dx) : 0.0L);
      lh += std::log(std::abs(xi - xk));
    }
  }
  return static_cast<long double>(beta) * lh - static_cast<long double>(beta) / (4.0L * n) * sq;
}

// AC1: OU drift against a five-point central difference of the log-density.
CriterionResult ac1(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "drift equals half the gradient of the Gibbs log-density";
  Rng rng = make_rng(o.seed, 1);
  double worst = 0.0, density_dev = 0.0;
  nlohmann::json cases = nlohmann::json::array();
  for (std::size_t n : {2u, 8u, 32u}) {
    for (double beta : {1.0, 2.0, 4.0}) {
      double case_worst = 0.0;
      std::uniform_real_distribution<double> unif(-2.0 * n, 2.0 * n);
      for (int s = 0; s < 100; ++s) {
        std::vector<double> x(n);
        do {
          for (double& v : x) v = unif(rng);
          std::sort(x.begin(), x.end());
        } while (min_pair_distance(LabeledState::increasing(x)) < 1e-6);
        const long double ref = log_density_ld(x, beta, n, 0, 0.0);
        density_dev = std::max(density_dev, static_cast<double>(std::abs(gibbs_log_density(x, beta, n) - ref) /
                                                                 std::max(1.0L, std::abs(ref))));
        const auto d = gibbs_drift(x, beta, n, DysonModel::ou);
        for (std::size_t j = 0; j < n; ++j) {
          double gap = kUnboundedWindow;
          if (j > 0) gap = std::min(gap, x[j] - x[j - 1]);
          if (j + 1 < n) gap = std::min(gap, x[j + 1] - x[j]);
          const double h = 1e-3 * std::min(gap, 1.0);
          auto f = [&](double dx) { return log_density_ld(x, beta, n, j, dx); };
          const long double g = (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12.0L * h);
          case_worst = std::max(case_worst, static_cast<double>(std::abs(d[j] - 0.5L * g) / std::abs(d[j])));
        }
      }
      worst = std::max(worst, case_worst);
      cases.push_back({{"N", n}, {"beta", beta}, {"max_rel_err", case_worst}});
    }
  }
  r.pass = worst < 1e-6 && density_dev < 1e-12;
  r.summary = fmt("max relative error %.3e over 900 states (threshold 1e-6); log-density dev %.1e", worst,
                  density_dev);
  r.data = {{"cases", cases}, {"max_rel_err", worst}, {"log_density_rel_dev", density_dev}};
  return r;
}

std::vector<LabeledState> gibbs_states(std::size_t n, double beta, std::size_t count, std::size_t chains,
                                       std::size_t thin, std::uint64_t seed, unsigned threads, double* acc) {
  McmcConfig m;
  m.burn_in = 4000;
  m.thinning = thin;
  const std::size_t per = (count + chains - 1) / chains;
  m.steps = m.burn_in + thin * per;
  m.seed = seed;
  auto res = mcmc_gibbs_chains(n, beta, m, chains, threads);
  if (acc) *acc = res.acceptance_rate;
  res.samples.resize(std::min(res.samples.size(), count));
  return res.samples;
}

// AC2: Dyson OU dynamics started in equilibrium stays in equilibrium.
CriterionResult ac2(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "stationarity of the OU Dyson dynamics (N=16, beta=2, T=1)";
  const std::size_t n = 16;
  const double beta = 2.0;
  const std::size_t paths = scaled(2000, o.size, 50);
  double acc = 0.0;
  const auto initial = gibbs_states(n, beta, paths, 8, 200, stream_seed(o.seed, 21), o.threads, &acc);
  const auto reference = gibbs_states(n, beta, 2 * paths, 8, 200, stream_seed(o.seed, 22), o.threads, nullptr);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  cfg.max_halvings = 40;
  cfg.seed = stream_seed(o.seed, 23);
  cfg.record_stride = 1000;
  const auto rep = stationarity_run(n, beta, cfg, initial, reference, o.threads);
  bool pass = true;
  std::string zs;
  for (const auto& s : rep.stats) {
    if (s.name == "var_sum_sq") continue;
    pass = pass && std::abs(s.z) < 3.0;
    zs += fmt("%s z=%+.2f ", s.name.c_str(), s.z);
  }
  r.pass = pass;
  r.summary = fmt("%zu paths; ", rep.paths) + zs + "(|z| < 3)";
  r.data = to_json(rep);
  r.data["mcmc_acceptance"] = acc;
  return r;
}

// AC3: Metropolis and tridiagonal samplers agree on E[sum x^2].
CriterionResult ac3(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "MCMC vs tridiagonal model, E[sum x^2] at N=8";
  const std::size_t n = 8;
  bool pass = true;
  nlohmann::json cases = nlohmann::json::array();
  std::string line;
  for (double beta : {1.0, 2.0, 4.0}) {
    const std::size_t count = scaled(8000, o.size, 400);
    McmcConfig m;
    m.burn_in = 4000;
    m.thinning = 20;
    m.steps = m.burn_in + m.thinning * (count / 8);
    m.seed = stream_seed(o.seed, 31 + static_cast<std::uint64_t>(beta));
    const auto mc = mcmc_gibbs_chains(n, beta, m, 8, o.threads);
    std::vector<double> a;
    for (const auto& s : mc.samples) {
      double q = 0.0;
      for (double v : s.coords()) q += v * v;
      a.push_back(q);
    }
    const auto tri = tridiag_beta_ensemble(n, beta, scaled(10000, o.size, 500),
                                           stream_seed(o.seed, 35 + static_cast<std::uint64_t>(beta)),
                                           BetaScaling::gibbs_bulk, o.threads);
    std::vector<double> b;
    for (const auto& s : tri) {
      double q = 0.0;
      for (double v : s.coords()) q += v * v;
      b.push_back(q);
    }
    const MeanSe ma = batch_mean_se(a, 40);
    const MeanSe mb = mean_se(b);
    const double z = z_score(ma, mb);
    const double exact = 2.0 * n * n / beta + static_cast<double>(n * n * (n - 1));
    pass = pass && std::abs(z) < 3.0;
    line += fmt("beta=%g z=%+.2f ", beta, z);
    cases.push_back({{"beta", beta},
                     {"mcmc_mean", ma.mean},
                     {"mcmc_se", ma.se},
                     {"tridiag_mean", mb.mean},
                     {"tridiag_se", mb.se},
                     {"z", z},
                     {"exact", exact},
                     {"mcmc_acceptance", mc.acceptance_rate}});
  }
  r.pass = pass;
  r.summary = line + "(|z| < 3)";
  r.data = {{"cases", cases}};
  return r;
}

// AC4: semicircle and edge location at N=200.
CriterionResult ac4(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "semicircle KS and edge rescaling (N=200, beta=2)";
  const std::size_t n = 200;
  const auto samples =
      tridiag_beta_ensemble(n, 2.0, scaled(500, o.size, 60), stream_seed(o.seed, 41), BetaScaling::hermite, o.threads);
  const double ks = semicircle_compare(samples, n);
  double top = 0.0;
  for (const auto& s : samples) top += edge_rescale(s, n)[n - 1];
  top /= static_cast<double>(samples.size());
  r.pass = ks < 0.03 && top >= -3.0 && top <= 1.0;
  r.summary = fmt("KS %.4f (< 0.03); mean largest rescaled %.3f (in [-3, 1])", ks, top);
  r.data = {{"ks", ks}, {"mean_largest_rescaled", top}, {"samples", samples.size()}};
  return r;
}

// AC5: bulk spacings against the beta = 2 Wigner surmise.
CriterionResult ac5(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "bulk spacing vs Wigner surmise (N=200, beta=2)";
  const auto samples = tridiag_beta_ensemble(200, 2.0, scaled(500, o.size, 60), stream_seed(o.seed, 51),
                                             BetaScaling::hermite, o.threads);
  const auto [lo, hi] = central_window(samples, 0.5);
  const auto sp = spacing_distribution(samples, lo, hi, wigner_surmise_beta2_cdf);
  r.pass = sp.ks < 0.05;
  r.summary = fmt("KS %.4f over %zu spacings (< 0.05)", sp.ks, sp.spacings.size());
  r.data = {{"ks", sp.ks}, {"spacings", sp.spacings.size()}, {"window", {lo, hi}}, {"histogram", sp.histogram}};
  return r;
}

// AC6: one- and two-point functions of sampled sine-kernel configurations.
CriterionResult ac6(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "sine-kernel DPP: rho1 and determinantal rho2";
  DppSampleConfig cfg;
  cfg.a = 0.0;
  cfg.b = 10.0 * pi;
  cfg.panels = 10;
  cfg.nodes_per_panel = 20;
  cfg.seed = stream_seed(o.seed, 61);
  const DppSampler sampler(SineKernel{}, cfg);
  const auto samples = sampler.samples(scaled(10000, o.size, 200), o.threads);
  const BinGrid bins{cfg.a, cfg.b, 10};
  const auto r1 = empirical_correlation(samples, 1, bins);
  const auto r2 = empirical_correlation(samples, 2, bins);

  double worst1 = 0.0;
  for (std::size_t i = 1; i + 1 < bins.count; ++i) worst1 = std::max(worst1, std::abs(r1.value[i] * pi - 1.0));

  // Bin averages of 1/pi^2 - K(x, y)^2: the estimator's expectation.
  const double w = bins.width();
  double worst_z = 0.0;
  bool finite = true;
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t i = 0; i < bins.count; ++i) {
    for (std::size_t j = 0; j < bins.count; ++j) {
      const auto gx = gauss_legendre(20, bins.a + w * i, bins.a + w * (i + 1));
      const auto gy = gauss_legendre(20, bins.a + w * j, bins.a + w * (j + 1));
      double e = 0.0;
      for (std::size_t p = 0; p < 20; ++p) {
        for (std::size_t q = 0; q < 20; ++q) {
          const double k = sine_kernel(gx.nodes[p], gy.nodes[q]);
          e += gx.weights[p] * gy.weights[q] * (1.0 / (pi * pi) - k * k);
        }
      }
      e /= w * w;
      const std::size_t c = i * bins.count + j;
      const double se = r2.stderr_[c];
      if (!(se > 0.0)) {
        finite = false;
        continue;
      }
      const double z = (r2.value[c] - e) / se;
      worst_z = std::max(worst_z, std::abs(z));
      cells.push_back({{"i", i}, {"j", j}, {"estimate", r2.value[c]}, {"expected", e}, {"stderr", se}, {"z", z}});
    }
  }
  r.pass = worst1 < 0.05 && finite && worst_z < 3.0;
  r.summary = fmt("%zu samples; rho1 max rel dev %.4f (< 0.05); rho2 max |z| %.2f over 100 cells (< 3)",
                  samples.size(), worst1, worst_z);
  r.data = {{"rho1", r1.value},       {"rho1_stderr", r1.stderr_},         {"rho1_max_rel_dev", worst1},
            {"rho2_cells", cells},    {"rho2_max_abs_z", worst_z},         {"samples", samples.size()},
            {"expected_count", sampler.expected_count()}};
  return r;
}

// AC7: Airy diagonal against the off-diagonal limit, and the edge asymptotics.
CriterionResult ac7(const ExperimentOptions&) {
  CriterionResult r;
  r.title = "Airy kernel diagonal and edge density";
  double worst = 0.0;
  for (double x = -10.0; x <= 5.0 + 1e-12; x += 0.25) {
    const double h = 1e-3;
    // Two Richardson levels on K(x, x + h), h -> 0.
    const double k1 = airy_kernel(x, x + h), k2 = airy_kernel(x, x + 0.5 * h), k4 = airy_kernel(x, x + 0.25 * h);
    const double lim = (4.0 * (2.0 * k4 - k2) - (2.0 * k2 - k1)) / 3.0;
    worst = std::max(worst, std::abs(airy_kernel(x, x) - lim));
  }
  const double ratio = airy_kernel(-40.0, -40.0) * pi / std::sqrt(40.0);
  r.pass = worst < 1e-6 && ratio >= 0.98 && ratio <= 1.02;
  r.summary = fmt("max |diag - limit| %.3e on [-10, 5] (< 1e-6); K(-40,-40) pi/sqrt(40) = %.5f", worst, ratio);
  r.data = {{"max_diag_err", worst}, {"edge_ratio", ratio}};
  return r;
}

// AC8: compensator closed form vs quadrature.
CriterionResult ac8(const ExperimentOptions&) {
  CriterionResult r;
  r.title = "soft-edge compensator 2 sqrt(r)/pi";
  double worst = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (double rr : {0.1, 1.0, 10.0, 100.0}) {
    const double a = soft_edge_compensator(rr);
    const double q = soft_edge_compensator_quadrature(rr);
    worst = std::max(worst, std::abs(a - q));
    rows.push_back({{"r", rr}, {"closed_form", a}, {"quadrature", q}});
  }
  r.pass = worst < 1e-10;
  r.summary = fmt("max |closed form - quadrature| %.3e (< 1e-10)", worst);
  r.data = {{"rows", rows}, {"max_abs_err", worst}};
  return r;
}

// AC9: Pearcey integrals satisfy their ODEs and are converged.
CriterionResult ac9(const ExperimentOptions&) {
  CriterionResult r;
  r.title = "Pearcey integrals: ODE residuals and node doubling";
  const double h = 1e-4;
  double res_q = 0.0, res_p = 0.0, drift = 0.0;
  const PearceyOptions fine{320};
  for (int i = -30; i <= 30; ++i) {
    const double t = 0.1 * i;
    const auto c = pearcey_pq(t);
    const auto up = pearcey_pq(t + h);
    const auto dn = pearcey_pq(t - h);
    res_q = std::max(res_q, std::abs((up.d2q - dn.d2q) / (2 * h) - t * c.q));
    res_p = std::max(res_p, std::abs((up.d2p - dn.d2p) / (2 * h) + t * c.p));
    const auto f = pearcey_pq(t, fine);
    drift = std::max({drift, std::abs(f.p - c.p), std::abs(f.dp - c.dp), std::abs(f.d2p - c.d2p),
                      std::abs(f.q - c.q), std::abs(f.dq - c.dq), std::abs(f.d2q - c.d2q)});
  }
  r.pass = res_q < 1e-6 && res_p < 1e-6 && drift < 1e-10;
  r.summary = fmt("|Q'''-yQ| %.2e, |P'''+xP| %.2e (< 1e-6); doubling change %.2e (< 1e-10)", res_q, res_p, drift);
  r.data = {{"q_residual", res_q}, {"p_residual", res_p}, {"doubling_change", drift}};
  return r;
}

// AC10: Nystrom resolvent and the tacnode term ablation.
CriterionResult ac10(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "Airy resolvent on [0, 12] and tacnode ablation";
  const ResolventOperator res(12.0, 64);
  const double neumann = (res.neumann(20) - res.matrix()).cwiseAbs().maxCoeff();
  auto zero = std::make_shared<const ResolventOperator>(ResolventOperator::zero(12.0, 64));
  TacnodeTerms terms;
  terms.cross = false;
  const TacnodeEvaluator ablated(zero, terms);
  Rng rng = make_rng(o.seed, 101);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  double ablation = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = unif(rng), y = unif(rng);
    ablation = std::max(ablation, std::abs(ablated(x, y) - (airy_kernel(x, y) + airy_kernel(-x, -y))));
  }
  // Refinement (n, U) = (32, 6) -> (64, 12), reported only.
  const TacnodeEvaluator coarse(std::make_shared<const ResolventOperator>(6.0, 32));
  const TacnodeEvaluator finer(std::make_shared<const ResolventOperator>(12.0, 64));
  double refine = 0.0;
  for (double x = -3.0; x <= 3.0; x += 1.0) {
    for (double y = -3.0; y <= 3.0; y += 1.0) refine = std::max(refine, std::abs(coarse(x, y) - finer(x, y)));
  }
  r.pass = res.residual() < 1e-8 && neumann < 1e-6 && ablation <= 1e-14;
  r.summary = fmt("residual %.2e (< 1e-8); Neumann diff %.2e (< 1e-6); ablation diff %.2e", res.residual(), neumann,
                  ablation);
  r.data = {{"residual", res.residual()},   {"neumann_diff", neumann},        {"ablation_diff", ablation},
            {"lambda_max", res.lambda_max()}, {"condition", res.condition()}, {"tacnode_refinement_diff", refine}};
  return r;
}

// AC11: step control keeps every path ordered and the runs reproducible.
CriterionResult ac11(const ExperimentOptions& o) {
  CriterionResult r;
  r.title = "integrator robustness, N=2..32, beta in {1,2,4}, T=0.5";
  const std::size_t runs = scaled(1000, o.size, 10);
  std::size_t total = 0, violations = 0, errors = 0, mismatches = 0;
  std::uint64_t rejections = 0;
  nlohmann::json cases = nlohmann::json::array();
  std::size_t combo = 0;
  for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
    for (double beta : {1.0, 2.0, 4.0}) {
      IntegratorConfig cfg;
      cfg.dt = 1e-3;
      cfg.horizon = 0.5;
      cfg.max_halvings = 40;
      cfg.seed = stream_seed(o.seed, 110 + combo);
      cfg.record_stride = 10;
      const DriftModel model = FiniteNModel{beta, n, DysonModel::plain};
      std::vector<double> x0(n);
      for (std::size_t j = 0; j < n; ++j) x0[j] = static_cast<double>(j) - 0.5 * static_cast<double>(n - 1);
      const auto start = LabeledState::increasing(x0);
      std::vector<int> bad(runs, 0), err(runs, 0), diff(runs, 0);
      std::vector<std::uint64_t> rej(runs, 0);
      parallel_for(runs, o.threads, [&](std::size_t i) {
        try {
          const auto a = integrate(start, model, cfg, i);
          for (const auto& s : a.states) {
            const auto c = s.coords();
            for (std::size_t j = 0; j + 1 < c.size(); ++j) bad[i] += c[j] < c[j + 1] ? 0 : 1;
          }
          rej[i] = a.diagnostics.rejections;
          const auto b = integrate(start, model, cfg, i);
          diff[i] = to_csv(a) == to_csv(b) ? 0 : 1;
        } catch (const IntegrationError&) {
          err[i] = 1;
        }
      });
      std::size_t cv = 0, ce = 0, cm = 0;
      std::uint64_t cr = 0;
      for (std::size_t i = 0; i < runs; ++i) {
        cv += static_cast<std::size_t>(bad[i]);
        ce += static_cast<std::size_t>(err[i]);
        cm += static_cast<std::size_t>(diff[i]);
        cr += rej[i];
      }
      cases.push_back({{"N", n}, {"beta", beta}, {"runs", runs}, {"order_violations", cv}, {"errors", ce},
                       {"rerun_mismatches", cm}, {"rejections", cr}});
      total += runs;
      violations += cv;
      errors += ce;
      mismatches += cm;
      rejections += cr;
      ++combo;
    }
  }
  r.pass = violations == 0 && errors == 0 && mismatches == 0;
  r.summary = fmt("%zu runs: %zu order violations, %zu integration errors, %zu rerun mismatches (%llu step rejections)",
                  total, violations, errors, mismatches, static_cast<unsigned long long>(rejections));
  r.data = {{"cases", cases}, {"runs_total", total}};
  return r;
}

// AC12: the two integrability audits for the constant density 1/pi.
CriterionResult ac12(const ExperimentOptions&) {
  CriterionResult r;
  r.title = "integrability audits for rho = 1/pi";
  const Density rho = [](double) { return 1.0 / pi; };
  const auto a = audit_A5(rho, 1.0, 1.0, 1.0, 1.0);
  const auto b = audit_A5(rho, 1.0, 1.0, 1.0, 2.0);
  const double change = std::abs(a.value - b.value);
  const std::vector<double> grid{1, 2, 5, 10, 20, 50, 100, 1000};
  const auto rep = audit_A2(rho, 1.0, 1.0, grid);
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double closed = erf_tail(row.r / (row.r + 1.0)) * 2.0 * (row.r + 1.0) / pi;
    worst = std::max(worst, std::abs(row.value - closed));
  }
  r.pass = change < 1e-10 && !a.divergent && worst < 1e-8;
  r.summary = fmt("A5 = %.12f, cutoff-doubling change %.2e (< 1e-10); A2 max dev %.2e (< 1e-8)", a.value, change,
                  worst);
  r.data = {{"a5_value", a.value}, {"a5_doubling_change", change}, {"a5_cutoff", a.cutoff},
            {"a2_max_dev", worst}, {"a2", to_json(rep)}};
  return r;
}

using Runner = std::function<CriterionResult(const ExperimentOptions&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> reg{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12}};
  return reg;
}

}  // namespace

std::vector<std::string> criterion_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

CriterionResult run_criterion(const std::string& id, const ExperimentOptions& opts) {
  if (!(opts.size > 0.0)) throw DomainError("experiment: size must be positive");
  for (const auto& [name, fn] : registry()) {
    if (name != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = fn(opts);
    r.id = id;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw DomainError("experiment: unknown criterion '" + id + "'");
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id},           {"title", r.title}, {"pass", r.pass},
          {"summary", r.summary}, {"data", r.data},   {"seconds", r.seconds}};
}

}  // namespace dyson

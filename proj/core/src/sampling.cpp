#include "dyson/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dyson/errors.hpp"
#include "dyson/parallel.hpp"
#include "dyson/potentials.hpp"
#include "dyson/quadrature.hpp"

namespace dyson {

void validate(const McmcConfig& cfg) {
  if (cfg.steps <= cfg.burn_in) throw DomainError("mcmc: steps must exceed burn_in");
  if (cfg.thinning == 0) throw DomainError("mcmc: thinning must be positive");
  if (!(cfg.proposal_scale > 0.0) || !std::isfinite(cfg.proposal_scale)) {
    throw DomainError("mcmc: proposal scale must be positive");
  }
}

namespace {

McmcResult run_chain(std::size_t n, double beta, const McmcConfig& cfg, Rng& rng) {
  const double conf = beta / (4.0 * static_cast<double>(n));
  std::vector<double> x(n);
  // Spread over the bulk support [-2N, 2N].
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.8 * static_cast<double>(n) * (2.0 * (static_cast<double>(i) + 1.0) / (static_cast<double>(n) + 1.0) - 1.0);
  }
  auto site = [&](std::size_t i, double v) {
    double e = -conf * v * v;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double d = std::abs(v - x[k]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      e += beta * std::log(d);
    }
    return e;
  };

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  McmcResult res;
  double scale = cfg.proposal_scale;
  std::size_t block_acc = 0, block_prop = 0;
  std::size_t acc = 0, prop_count = 0;
  constexpr std::size_t kTuneBlock = 50;
  std::vector<double> trial;

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const bool burning = step < cfg.burn_in;
    for (std::size_t i = 0; i < n; ++i) {
      const double old = x[i];
      const double prop = old + scale * gauss(rng);
      const double delta = site(i, prop) - site(i, old);
      const double log_u = std::log(unif(rng));
      const bool accept = log_u < delta;
      if (cfg.log_decisions) {
        McmcDecision d;
        d.log_density_current = gibbs_log_density(x, beta, n);
        trial = x;
        trial[i] = prop;
        d.log_density_proposed = gibbs_log_density(trial, beta, n);
        d.log_uniform = log_u;
        d.accepted = accept;
        res.decisions.push_back(d);
      }
      if (accept) x[i] = prop;
      if (burning) {
        ++block_prop;
        block_acc += accept ? 1 : 0;
      } else {
        ++prop_count;
        acc += accept ? 1 : 0;
      }
    }
    if (burning && cfg.auto_tune && (step + 1) % kTuneBlock == 0) {
      const double rate = static_cast<double>(block_acc) / static_cast<double>(block_prop);
      if (rate < 0.25) scale *= 0.7;
      if (rate > 0.40) scale *= 1.3;
      block_acc = block_prop = 0;
    }
    if (!burning && (step - cfg.burn_in) % cfg.thinning == 0) {
      std::vector<double> s = x;
      std::sort(s.begin(), s.end());
      res.samples.push_back(LabeledState::increasing(std::move(s)));
    }
  }
  res.acceptance_rate = prop_count == 0 ? 0.0 : static_cast<double>(acc) / static_cast<double>(prop_count);
  res.proposal_scale = scale;
  return res;
}

}  // namespace

McmcResult mcmc_gibbs(std::size_t n, double beta, const McmcConfig& cfg) {
  if (n == 0) throw DomainError("mcmc_gibbs: N must be positive");
  if (!(beta > 0.0)) throw DomainError("mcmc_gibbs: beta must be positive");
  validate(cfg);
  Rng rng = make_rng(cfg.seed, 0);
  return run_chain(n, beta, cfg, rng);
}

McmcResult mcmc_gibbs_chains(std::size_t n, double beta, const McmcConfig& cfg, std::size_t chains,
                             unsigned threads) {
  if (n == 0) throw DomainError("mcmc_gibbs: N must be positive");
  if (!(beta > 0.0)) throw DomainError("mcmc_gibbs: beta must be positive");
  if (chains == 0) throw DomainError("mcmc_gibbs: need at least one chain");
  validate(cfg);
  std::vector<McmcResult> parts(chains);
  parallel_for(chains, threads, [&](std::size_t c) {
    Rng rng = make_rng(cfg.seed, c);
    parts[c] = run_chain(n, beta, cfg, rng);
  });
  McmcResult out;
  double rate = 0.0, scale = 0.0;
  for (auto& p : parts) {
    out.samples.insert(out.samples.end(), std::make_move_iterator(p.samples.begin()),
                       std::make_move_iterator(p.samples.end()));
    out.decisions.insert(out.decisions.end(), p.decisions.begin(), p.decisions.end());
    rate += p.acceptance_rate;
    scale += p.proposal_scale;
  }
  out.acceptance_rate = rate / static_cast<double>(chains);
  out.proposal_scale = scale / static_cast<double>(chains);
  return out;
}

LabeledState tridiag_beta_sample(std::size_t n, double beta, Rng& rng, BetaScaling scaling) {
  if (n == 0) throw DomainError("tridiag_beta_sample: N must be positive");
  if (!(beta > 0.0)) throw DomainError("tridiag_beta_sample: beta must be positive");
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(ni);
  Eigen::VectorXd sub(std::max<Eigen::Index>(ni - 1, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double r2 = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < ni; ++i) {
    diag(i) = gauss(rng);  // N(0, 2) / sqrt 2
    if (i + 1 < ni) {
      std::chi_squared_distribution<double> chi2(beta * static_cast<double>(ni - 1 - i));
      sub(i) = r2 * std::sqrt(chi2(rng));
    }
  }
  std::vector<double> ev(n);
  if (n == 1) {
    ev[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (std::size_t i = 0; i < n; ++i) ev[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  }
  const double s = scaling == BetaScaling::gibbs_bulk ? std::sqrt(2.0 * static_cast<double>(n) / beta)
                                                      : std::sqrt(2.0 / beta);
  for (double& v : ev) v *= s;
  std::sort(ev.begin(), ev.end());
  return LabeledState::increasing(std::move(ev));
}

LabeledState tridiag_beta_sample(std::size_t n, double beta, std::uint64_t seed, BetaScaling scaling) {
  Rng rng = make_rng(seed, 0);
  return tridiag_beta_sample(n, beta, rng, scaling);
}

std::vector<LabeledState> tridiag_beta_ensemble(std::size_t n, double beta, std::size_t count, std::uint64_t seed,
                                                BetaScaling scaling, unsigned threads) {
  std::vector<LabeledState> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    out[i] = tridiag_beta_sample(n, beta, rng, scaling);
  });
  return out;
}

void validate(const DppSampleConfig& cfg, bool planar) {
  if (!(cfg.tolerance >= 0.0)) throw DomainError("dpp: tolerance must be nonnegative");
  if (planar) {
    if (!(cfg.radius > 0.0) || !std::isfinite(cfg.radius)) throw DomainError("dpp: radius must be positive");
    if (cfg.radial_nodes < 2 || cfg.angular_nodes < 4) throw DomainError("dpp: polar grid too coarse");
    if (cfg.radial_nodes * cfg.angular_nodes < 16) throw DomainError("dpp: grid size must be >= 16");
    return;
  }
  if (!(cfg.b > cfg.a) || !std::isfinite(cfg.a) || !std::isfinite(cfg.b)) throw DomainError("dpp: need a < b");
  if (cfg.panels == 0 || cfg.nodes_per_panel == 0) throw DomainError("dpp: empty grid");
  if (cfg.panels * cfg.nodes_per_panel < 16) throw DomainError("dpp: grid size must be >= 16");
}

namespace {

// Spectral sampler on the eigenvectors (columns of `all`) with Bernoulli means `lambda`.
template <class Mat>
std::vector<std::size_t> spectral_sample(const Mat& all, const std::vector<double>& lambda, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::Index> keep;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (unif(rng) < lambda[k]) keep.push_back(static_cast<Eigen::Index>(k));
  }
  const Eigen::Index n = all.rows();
  Mat v(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = all.col(keep[c]);

  std::vector<std::size_t> picked;
  Eigen::VectorXd p(n);
  while (v.cols() > 0) {
    for (Eigen::Index i = 0; i < n; ++i) p(i) = v.row(i).squaredNorm();
    const double total = p.sum();
    double u = unif(rng) * total;
    Eigen::Index i = 0;
    for (; i < n - 1; ++i) {
      u -= p(i);
      if (u < 0.0) break;
    }
    while (p(i) == 0.0 && i > 0) --i;  // never land on a node of zero mass
    picked.push_back(static_cast<std::size_t>(i));
    const Eigen::Index k = v.cols();
    if (k == 1) break;

    Eigen::Index j = 0;
    v.row(i).cwiseAbs().maxCoeff(&j);
    const auto pivot = v(i, j);
    const auto vj = v.col(j).eval();
    for (Eigen::Index c = 0; c < k; ++c) {
      if (c != j) v.col(c) -= vj * (v(i, c) / pivot);
    }
    if (j != k - 1) v.col(j) = v.col(k - 1);
    v.conservativeResize(Eigen::NoChange, k - 1);
    // Modified Gram-Schmidt on the remaining columns.
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      for (Eigen::Index d = 0; d < c; ++d) v.col(c) -= v.col(d) * v.col(d).dot(v.col(c));
      v.col(c).normalize();
    }
  }
  return picked;
}

}  // namespace

DppSampler::DppSampler(const KernelModel& kernel, const DppSampleConfig& cfg) : cfg_(cfg) {
  if (std::holds_alternative<PearceyKernel>(kernel) || std::holds_alternative<TacnodeKernel>(kernel)) {
    throw DomainError("dpp_sample: sampling the " + kernel_name(kernel) + " process is not supported");
  }
  const bool planar = kernel_dim(kernel) == 2;
  validate(cfg_, planar);
  if (const auto* b = std::get_if<BesselKernel>(&kernel); b && cfg_.a < 0.0) {
    throw DomainError("dpp_sample: Bessel window must lie in [0, inf)");
  }
  dim_ = planar ? 2 : 1;
  real_ = !planar;
  if (planar) {
    const auto radial = gauss_legendre(cfg_.radial_nodes, 0.0, cfg_.radius);
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(cfg_.angular_nodes);
    for (std::size_t i = 0; i < radial.size(); ++i) {
      for (std::size_t m = 0; m < cfg_.angular_nodes; ++m) {
        const double th = dtheta * static_cast<double>(m);
        const double r = radial.nodes[i];
        nodes_.emplace_back(r * std::cos(th), r * std::sin(th));
        weights_.push_back(r * radial.weights[i] * dtheta);
      }
    }
  } else {
    const auto g = composite_gauss_legendre(cfg_.panels, cfg_.nodes_per_panel, cfg_.a, cfg_.b);
    for (double x : g.nodes) nodes_.emplace_back(x);
    weights_ = g.weights;
  }
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd ks(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto k = kernel_eval(kernel, nodes_[static_cast<std::size_t>(i)], nodes_[static_cast<std::size_t>(j)]);
      const double sw = std::sqrt(weights_[static_cast<std::size_t>(i)] * weights_[static_cast<std::size_t>(j)]);
      ks(i, j) = sw * k;
      ks(j, i) = std::conj(ks(i, j));
    }
  }
  decompose(ks);
}

DppSampler::DppSampler(const std::function<double(double, double)>& kernel, const DppSampleConfig& cfg) : cfg_(cfg) {
  validate(cfg_, false);
  const auto g = composite_gauss_legendre(cfg_.panels, cfg_.nodes_per_panel, cfg_.a, cfg_.b);
  for (double x : g.nodes) nodes_.emplace_back(x);
  weights_ = g.weights;
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd ks(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double sw = std::sqrt(weights_[static_cast<std::size_t>(i)] * weights_[static_cast<std::size_t>(j)]);
      ks(i, j) = sw * kernel(g.nodes[static_cast<std::size_t>(i)], g.nodes[static_cast<std::size_t>(j)]);
      ks(j, i) = std::conj(ks(i, j));
    }
  }
  decompose(ks);
}

void DppSampler::decompose(const Eigen::MatrixXcd& ks) {
  Eigen::VectorXd ev;
  if (real_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ks.real());
    ev = es.eigenvalues();
    vectors_ = es.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ks);
    ev = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }
  const Eigen::Index n = ev.size();
  // Decreasing order; drop numerically empty modes.
  lambda_.clear();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    double l = ev(k);
    if (l < -cfg_.tolerance || l > 1.0 + cfg_.tolerance) {
      throw DiscretizationError("dpp: discretized kernel has eigenvalue " + std::to_string(l) + " outside [0, 1]");
    }
    l = std::clamp(l, 0.0, 1.0);
    if (l <= 1e-15) continue;
    lambda_.push_back(l);
    cols.push_back(k);
  }
  Eigen::MatrixXcd v(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = vectors_.col(cols[c]);
  vectors_ = std::move(v);
}

Configuration DppSampler::sample(Rng& rng) const {
  std::vector<std::size_t> idx;
  if (real_) {
    const Eigen::MatrixXd vr = vectors_.real();
    idx = spectral_sample(vr, lambda_, rng);
  } else {
    idx = spectral_sample(vectors_, lambda_, rng);
  }
  std::vector<Point> pts;
  pts.reserve(idx.size());
  for (auto i : idx) pts.push_back(nodes_[i]);
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a < b; });
  return Configuration(std::move(pts), dim_);
}

Configuration DppSampler::sample(std::uint64_t index) const {
  Rng rng = make_rng(cfg_.seed, index);
  return sample(rng);
}

std::vector<Configuration> DppSampler::samples(std::size_t count, unsigned threads) const {
  std::vector<Configuration> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = sample(static_cast<std::uint64_t>(i)); });
  return out;
}

double DppSampler::expected_count() const {
  double s = 0.0;
  for (double l : lambda_) s += l;
  return s;
}

double DppSampler::count_variance() const {
  double s = 0.0;
  for (double l : lambda_) s += l * (1.0 - l);
  return s;
}

nlohmann::json DppSampler::metadata() const {
  nlohmann::json j;
  j["seed"] = cfg_.seed;
  j["grid_size"] = nodes_.size();
  if (dim_ == 2) {
    j["window"] = {{"radius", cfg_.radius}, {"radial_nodes", cfg_.radial_nodes}, {"angular_nodes", cfg_.angular_nodes}};
  } else {
    j["window"] = {{"a", cfg_.a}, {"b", cfg_.b}, {"panels", cfg_.panels}, {"nodes_per_panel", cfg_.nodes_per_panel}};
  }
  j["expected_count"] = expected_count();
  j["count_variance"] = count_variance();
  j["spectrum"] = lambda_;
  return j;
}

Configuration dpp_sample(const KernelModel& kernel, const DppSampleConfig& cfg) {
  return DppSampler(kernel, cfg).sample(std::uint64_t{0});
}

Configuration poisson_sample(double intensity, double a, double b, Rng& rng) {
  if (!(intensity >= 0.0) || !(b >= a)) throw DomainError("poisson_sample: need intensity >= 0 and a <= b");
  std::poisson_distribution<long> count(intensity * (b - a));
  std::uniform_real_distribution<double> unif(a, b);
  const long k = intensity == 0.0 || a == b ? 0 : count(rng);
  std::vector<double> xs(static_cast<std::size_t>(k));
  for (double& x : xs) x = unif(rng);
  std::sort(xs.begin(), xs.end());
  return Configuration::from_1d(xs);
}

}  // namespace dyson

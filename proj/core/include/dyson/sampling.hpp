#pragma once

// Samplers: Metropolis for the finite-N log-gas density, the tridiagonal
// beta-ensemble, discretized determinantal processes and Poisson points.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dyson/core.hpp"
#include "dyson/kernels.hpp"
#include "dyson/random.hpp"

namespace dyson {

struct McmcConfig {
  std::size_t steps = 20000;  ///< sweeps in total, burn-in included
  std::size_t burn_in = 2000;
  std::size_t thinning = 10;
  double proposal_scale = 1.0;  ///< initial Gaussian proposal standard deviation
  std::uint64_t seed = 1;
  bool auto_tune = true;  ///< adapt the scale during burn-in towards 25-40% acceptance
  bool log_decisions = false;
};

void validate(const McmcConfig& cfg);

/// One Metropolis decision, with full log-densities (only when logging is on).
struct McmcDecision {
  double log_density_current = 0.0;
  double log_density_proposed = 0.0;
  double log_uniform = 0.0;
  bool accepted = false;
};

struct McmcResult {
  std::vector<LabeledState> samples;  ///< increasing states after burn-in, thinned
  double acceptance_rate = 0.0;       ///< after burn-in
  double proposal_scale = 0.0;        ///< scale used after burn-in
  std::vector<McmcDecision> decisions;
};

/// Single-coordinate Gaussian random-walk Metropolis on beta log h_N(x) -
/// (beta/4N)|x|^2. One step is a sweep over all N coordinates.
McmcResult mcmc_gibbs(std::size_t n, double beta, const McmcConfig& cfg);

/// `chains` independent chains (stream i of cfg.seed each), samples concatenated
/// in chain order.
McmcResult mcmc_gibbs_chains(std::size_t n, double beta, const McmcConfig& cfg, std::size_t chains,
                             unsigned threads = 0);

enum class BetaScaling {
  gibbs_bulk,  ///< density prop. to |Delta|^beta e^{-(beta/4N)|x|^2}; support ~ [-2N, 2N]
  hermite,     ///< density prop. to |Delta|^beta e^{-(beta/4)|x|^2}; support ~ [-2 sqrt N, 2 sqrt N]
};

/// Eigenvalues of the Dumitriu-Edelman tridiagonal model, rescaled to `scaling`.
LabeledState tridiag_beta_sample(std::size_t n, double beta, Rng& rng, BetaScaling scaling = BetaScaling::gibbs_bulk);
LabeledState tridiag_beta_sample(std::size_t n, double beta, std::uint64_t seed,
                                 BetaScaling scaling = BetaScaling::gibbs_bulk);
/// `count` samples, sample i from stream i of `seed`.
std::vector<LabeledState> tridiag_beta_ensemble(std::size_t n, double beta, std::size_t count, std::uint64_t seed,
                                                BetaScaling scaling = BetaScaling::gibbs_bulk, unsigned threads = 0);

struct DppSampleConfig {
  /// 1D window [a, b], split into `panels` panels of `nodes_per_panel` Gauss-Legendre nodes.
  double a = 0.0;
  double b = 31.41592653589793;
  std::size_t panels = 10;
  std::size_t nodes_per_panel = 20;
  /// Ginibre: disk of this radius, polar grid.
  double radius = 3.0;
  std::size_t radial_nodes = 24;
  std::size_t angular_nodes = 40;
  std::uint64_t seed = 1;
  /// Spectrum tolerance: eigenvalues in [-tol, 1 + tol] are clipped into [0, 1].
  double tolerance = 1e-8;
};

void validate(const DppSampleConfig& cfg, bool planar);

/// Discrete determinantal process on quadrature nodes with marginal kernel
/// W^{1/2} K W^{1/2} (Nystrom). Samples are drawn by the spectral method: keep
/// eigenvector k with probability lambda_k, then pick nodes one at a time from
/// the projection's diagonal, conditioning by orthogonal elimination.
/// Realizations are subsets of the grid nodes.
class DppSampler {
 public:
  /// Sine, Airy, Bessel (1D window) or Ginibre (disk). Pearcey and tacnode
  /// sampling is not supported (DomainError).
  DppSampler(const KernelModel& kernel, const DppSampleConfig& cfg);
  /// Any Hermitian kernel on the 1D window.
  DppSampler(const std::function<double(double, double)>& kernel, const DppSampleConfig& cfg);

  Configuration sample(Rng& rng) const;
  /// Sample i of the configured seed.
  Configuration sample(std::uint64_t index) const;
  std::vector<Configuration> samples(std::size_t count, unsigned threads = 0) const;

  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Clipped eigenvalues, decreasing.
  const std::vector<double>& spectrum() const noexcept { return lambda_; }
  /// sum lambda_k: mean number of points.
  double expected_count() const;
  /// sum lambda_k (1 - lambda_k): variance of the number of points.
  double count_variance() const;
  double window_length() const noexcept { return cfg_.b - cfg_.a; }
  const DppSampleConfig& config() const noexcept { return cfg_; }

  nlohmann::json metadata() const;

 private:
  void decompose(const Eigen::MatrixXcd& ks);

  DppSampleConfig cfg_;
  int dim_ = 1;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
  std::vector<double> lambda_;
  Eigen::MatrixXcd vectors_;  // columns match lambda_
  bool real_ = true;
};

/// One sample with cfg.seed.
Configuration dpp_sample(const KernelModel& kernel, const DppSampleConfig& cfg);

/// Poisson process of constant intensity on [a, b].
Configuration poisson_sample(double intensity, double a, double b, Rng& rng);

}  // namespace dyson

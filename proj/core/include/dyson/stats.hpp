#pragma once

// Empirical correlation functions, spacing and density comparisons, and the
// integrability audits built on the Gaussian tail function.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyson/core.hpp"

namespace dyson {

/// (2 pi)^{-1/2} int_t^inf e^{-x^2/2} dx.
double erf_tail(double t);

using Density = std::function<double(double)>;

struct AuditRow {
  double r = 0.0;
  double value = 0.0;
};

struct AuditReport {
  std::string kind;  ///< "A2" or "A5"
  double t = 0.0, big_r = 0.0, c = 0.0;
  std::vector<AuditRow> rows;
  bool nondecreasing = true;
  bool nonincreasing = true;
};

/// Erf(r / ((r + R) T)) * int_{|x| <= r + R} rho(x) dx at each r of the grid.
/// `dim` 2 treats rho as a radial density on the plane. Reports only.
AuditReport audit_A2(const Density& rho, double t, double big_r, std::span<const double> r_grid, int dim = 1);

struct A5Result {
  double value = 0.0;
  double cutoff = 0.0;      ///< |x| integrated up to
  double tail_bound = 0.0;  ///< contribution of cutoff < |x| < 2 cutoff
  bool divergent = false;   ///< tail increments not decreasing
};

/// int Erf((|x| - r)/sqrt(cT)) rho(x) dx, truncated where the integrand drops
/// below 1e-14 (times `cutoff_multiplier`).
A5Result audit_A5(const Density& rho, double r, double t, double c, double cutoff_multiplier = 1.0, int dim = 1);

nlohmann::json to_json(const AuditReport& report);
std::string to_csv(const AuditReport& report);

struct BinGrid {
  double a = 0.0;
  double b = 1.0;
  std::size_t count = 10;
  double width() const { return (b - a) / static_cast<double>(count); }
  double center(std::size_t i) const { return a + (static_cast<double>(i) + 0.5) * width(); }
};

/// rho^1 per bin, or rho^2 per bin pair (row-major, count x count).
struct CorrelationEstimate {
  int order = 1;
  BinGrid bins;
  std::vector<double> value;
  std::vector<double> stderr_;  ///< NaN where no sample hit the bin
  std::size_t samples = 0;
};

/// Binned estimator from >= 100 samples of 1D configurations. rho^2 counts
/// ordered pairs of distinct points.
CorrelationEstimate empirical_correlation(std::span<const Configuration> samples, int order, const BinGrid& bins);

std::string to_csv(const CorrelationEstimate& est);
nlohmann::json to_json(const CorrelationEstimate& est);

using Cdf = std::function<double(double)>;

/// Wigner surmise for beta = 2, p(s) = (32/pi^2) s^2 exp(-4 s^2/pi).
double wigner_surmise_beta2_pdf(double s);
double wigner_surmise_beta2_cdf(double s);
double exponential_cdf(double s);
/// Semicircle law of radius R.
double semicircle_cdf(double x, double radius);

/// sup |F_n - F| of a sample against a continuous CDF.
double ks_distance(std::vector<double> sample, const Cdf& cdf);

struct SpacingResult {
  std::vector<double> spacings;  ///< unfolded, mean exactly 1
  std::vector<double> histogram;  ///< density on [0, 4] in 40 bins
  double ks = 0.0;
};

/// Nearest-neighbour spacings of points lying in [lo, hi], unfolded by the
/// pooled empirical counting function (rank transform) and rescaled to mean 1.
/// Throws DomainError for fewer than 1000 spacings.
SpacingResult spacing_distribution(std::span<const LabeledState> samples, double lo, double hi, const Cdf& reference);

/// [lo, hi] holding the central `fraction` of all pooled points.
std::pair<double, double> central_window(std::span<const LabeledState> samples, double fraction);

/// KS distance of the pooled points (at least 10^4) to the semicircle of radius 2 sqrt(N).
double semicircle_compare(std::span<const LabeledState> samples, std::size_t n);
double semicircle_compare_radius(std::span<const LabeledState> samples, double radius);

}  // namespace dyson

#include "dyson/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dyson/errors.hpp"
#include "dyson/io.hpp"
#include "dyson/quadrature.hpp"

namespace dyson {

namespace {

using std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// int over |x| <= a of rho (dim 1) or of the radial density on the plane (dim 2).
double ball_integral(const Density& rho, double a, int dim) {
  if (a <= 0.0) return 0.0;
  if (dim == 1) {
    return integrate_adaptive(rho, -a, 0.0, 1e-13, 1e-12).value + integrate_adaptive(rho, 0.0, a, 1e-13, 1e-12).value;
  }
  if (dim != 2) throw DomainError("audit: dim must be 1 or 2");
  return integrate_adaptive([&](double s) { return 2.0 * pi * s * rho(s); }, 0.0, a, 1e-13, 1e-12).value;
}

}  // namespace

double erf_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

AuditReport audit_A2(const Density& rho, double t, double big_r, std::span<const double> r_grid, int dim) {
  if (!(t > 0.0)) throw DomainError("audit_A2: T must be positive");
  if (!(big_r >= 0.0)) throw DomainError("audit_A2: R must be nonnegative");
  AuditReport rep;
  rep.kind = "A2";
  rep.t = t;
  rep.big_r = big_r;
  for (double r : r_grid) {
    if (!(r > 0.0)) throw DomainError("audit_A2: r must be positive");
    const double v = erf_tail(r / ((r + big_r) * t)) * ball_integral(rho, r + big_r, dim);
    if (!rep.rows.empty()) {
      if (v < rep.rows.back().value) rep.nondecreasing = false;
      if (v > rep.rows.back().value) rep.nonincreasing = false;
    }
    rep.rows.push_back({r, v});
  }
  return rep;
}

A5Result audit_A5(const Density& rho, double r, double t, double c, double cutoff_multiplier, int dim) {
  if (!(t > 0.0) || !(c > 0.0)) throw DomainError("audit_A5: c and T must be positive");
  if (!(cutoff_multiplier >= 1.0)) throw DomainError("audit_A5: cutoff multiplier must be >= 1");
  if (dim != 1 && dim != 2) throw DomainError("audit_A5: dim must be 1 or 2");
  const double scale = std::sqrt(c * t);
  auto weight = [&](double s) { return erf_tail((std::abs(s) - r) / scale); };
  auto f1 = [&](double x) { return weight(x) * rho(x); };
  auto f2 = [&](double s) { return 2.0 * pi * s * weight(s) * rho(s); };
  auto mag = [&](double s) { return dim == 1 ? std::max(std::abs(f1(s)), std::abs(f1(-s))) : std::abs(f2(s)); };

  // First |x| beyond r where the integrand stays below 1e-14 over a unit step.
  double cut = std::max(r, 0.0) + scale;
  while (!(mag(cut) < 1e-14 && mag(cut + 1.0) < 1e-14)) {
    cut += scale;
    if (cut > 1e8) throw ConvergenceError("audit_A5: integrand does not decay");
  }
  cut *= cutoff_multiplier;

  auto integral = [&](double lo, double hi) {
    if (dim == 1) {
      return integrate_adaptive(f1, -hi, -lo, 1e-16, 1e-13).value + integrate_adaptive(f1, lo, hi, 1e-16, 1e-13).value;
    }
    return integrate_adaptive(f2, lo, hi, 1e-16, 1e-13).value;
  };
  A5Result res;
  res.cutoff = cut;
  // Split at r where the weight changes character.
  const double knot = std::clamp(r, 0.0, cut);
  res.value = integral(0.0, knot) + integral(knot, cut);
  res.tail_bound = std::abs(integral(cut, 2.0 * cut));
  const double previous = std::abs(integral(0.5 * cut, cut));
  res.divergent = res.tail_bound > 1e-12 && res.tail_bound >= previous;
  return res;
}

nlohmann::json to_json(const AuditReport& report) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = report.kind;
  j["T"] = report.t;
  j["R"] = report.big_r;
  j["c"] = report.c;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back({{"r", r.r}, {"value", r.value}});
  j["nondecreasing"] = report.nondecreasing;
  j["nonincreasing"] = report.nonincreasing;
  return j;
}

std::string to_csv(const AuditReport& report) {
  std::ostringstream os;
  os << "r,value\n";
  for (const auto& r : report.rows) os << format_double(r.r) << ',' << format_double(r.value) << '\n';
  return os.str();
}

CorrelationEstimate empirical_correlation(std::span<const Configuration> samples, int order, const BinGrid& bins) {
  if (order != 1 && order != 2) throw DomainError("empirical_correlation: order must be 1 or 2");
  if (samples.size() < 100) throw DomainError("empirical_correlation: need at least 100 samples");
  if (bins.count == 0 || !(bins.b > bins.a)) throw DomainError("empirical_correlation: bad bin grid");
  const std::size_t nb = bins.count;
  const std::size_t cells = order == 1 ? nb : nb * nb;
  std::vector<Accumulator> s1(cells), s2(cells);
  std::vector<double> counts(nb);
  std::vector<double> local(cells);
  const double w = bins.width();

  for (const auto& xi : samples) {
    if (xi.dim() != 1) throw DomainError("empirical_correlation: 1D configurations required");
    std::fill(counts.begin(), counts.end(), 0.0);
    for (const auto& p : xi.points()) {
      const double u = (p.x() - bins.a) / w;
      if (u < 0.0 || u >= static_cast<double>(nb)) continue;
      counts[std::min(static_cast<std::size_t>(u), nb - 1)] += 1.0;
    }
    if (order == 1) {
      local = counts;
    } else {
      for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < nb; ++j) local[i * nb + j] = counts[i] * (counts[j] - (i == j ? 1.0 : 0.0));
      }
    }
    for (std::size_t c = 0; c < cells; ++c) {
      s1[c].add(local[c]);
      s2[c].add(local[c] * local[c]);
    }
  }
  CorrelationEstimate est;
  est.order = order;
  est.bins = bins;
  est.samples = samples.size();
  const double ns = static_cast<double>(samples.size());
  const double vol = order == 1 ? w : w * w;
  est.value.resize(cells);
  est.stderr_.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double m = s1[c].value() / ns;
    const double var = std::max(0.0, (s2[c].value() / ns - m * m) * ns / (ns - 1.0));
    est.value[c] = m / vol;
    est.stderr_[c] = s1[c].value() == 0.0 ? kNaN : std::sqrt(var / ns) / vol;
  }
  return est;
}

std::string to_csv(const CorrelationEstimate& est) {
  std::ostringstream os;
  const std::size_t nb = est.bins.count;
  auto se = [](double v) { return std::isnan(v) ? std::string("NA") : format_double(v); };
  if (est.order == 1) {
    os << "x,value,stderr\n";
    for (std::size_t i = 0; i < nb; ++i) {
      os << format_double(est.bins.center(i)) << ',' << format_double(est.value[i]) << ',' << se(est.stderr_[i])
         << '\n';
    }
  } else {
    os << "x,y,value,stderr\n";
    for (std::size_t i = 0; i < nb; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        const std::size_t c = i * nb + j;
        os << format_double(est.bins.center(i)) << ',' << format_double(est.bins.center(j)) << ','
           << format_double(est.value[c]) << ',' << se(est.stderr_[c]) << '\n';
      }
    }
  }
  return os.str();
}

nlohmann::json to_json(const CorrelationEstimate& est) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["order"] = est.order;
  j["bins"] = {{"a", est.bins.a}, {"b", est.bins.b}, {"count", est.bins.count}};
  j["samples"] = est.samples;
  j["value"] = est.value;
  auto& se = j["stderr"] = nlohmann::json::array();
  for (double v : est.stderr_) se.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
  return j;
}

double wigner_surmise_beta2_pdf(double s) {
  if (s <= 0.0) return 0.0;
  return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
}

double wigner_surmise_beta2_cdf(double s) {
  if (s <= 0.0) return 0.0;
  return std::erf(2.0 * s / std::sqrt(pi)) - 4.0 * s / pi * std::exp(-4.0 * s * s / pi);
}

double exponential_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-s); }

double semicircle_cdf(double x, double radius) {
  if (x <= -radius) return 0.0;
  if (x >= radius) return 1.0;
  const double u = x / radius;
  return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / pi;
}

double ks_distance(std::vector<double> sample, const Cdf& cdf) {
  if (sample.empty()) throw DomainError("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

SpacingResult spacing_distribution(std::span<const LabeledState> samples, double lo, double hi, const Cdf& reference) {
  if (!(hi > lo)) throw DomainError("spacing_distribution: empty window");
  std::vector<double> pooled;
  for (const auto& s : samples) {
    if (s.dim() != 1) throw DomainError("spacing_distribution: 1D samples required");
    pooled.insert(pooled.end(), s.coords().begin(), s.coords().end());
  }
  std::sort(pooled.begin(), pooled.end());
  const double ns = static_cast<double>(samples.size());
  // Mean number of points per sample at or below x (midrank for ties).
  auto unfold = [&](double x) {
    const auto lo_it = std::lower_bound(pooled.begin(), pooled.end(), x);
    const auto hi_it = std::upper_bound(lo_it, pooled.end(), x);
    const double rank = static_cast<double>(lo_it - pooled.begin()) + 0.5 * static_cast<double>(hi_it - lo_it);
    return rank / ns;
  };
  SpacingResult res;
  for (const auto& s : samples) {
    const auto c = s.coords();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      if (c[i] < lo || c[i + 1] > hi) continue;
      res.spacings.push_back(unfold(c[i + 1]) - unfold(c[i]));
    }
  }
  if (res.spacings.size() < 1000) {
    throw DomainError("spacing_distribution: only " + std::to_string(res.spacings.size()) + " spacings (need 1000)");
  }
  double mean = 0.0;
  for (double v : res.spacings) mean += v;
  mean /= static_cast<double>(res.spacings.size());
  if (!(mean > 0.0)) throw DomainError("spacing_distribution: degenerate spacings");
  for (double& v : res.spacings) v /= mean;
  res.histogram.assign(40, 0.0);
  for (double v : res.spacings) {
    const auto b = static_cast<std::size_t>(v / 0.1);
    if (b < 40) res.histogram[b] += 1.0;
  }
  for (double& h : res.histogram) h /= static_cast<double>(res.spacings.size()) * 0.1;
  res.ks = ks_distance(res.spacings, reference);
  return res;
}

std::pair<double, double> central_window(std::span<const LabeledState> samples, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("central_window: fraction must be in (0, 1]");
  std::vector<double> pooled;
  for (const auto& s : samples) pooled.insert(pooled.end(), s.coords().begin(), s.coords().end());
  if (pooled.empty()) throw DomainError("central_window: no points");
  std::sort(pooled.begin(), pooled.end());
  const double q = 0.5 * (1.0 - fraction);
  const auto at = [&](double p) {
    return pooled[std::min(pooled.size() - 1, static_cast<std::size_t>(p * static_cast<double>(pooled.size())))];
  };
  return {at(q), at(1.0 - q)};
}

double semicircle_compare_radius(std::span<const LabeledState> samples, double radius) {
  if (!(radius > 0.0)) throw DomainError("semicircle_compare: radius must be positive");
  std::vector<double> pooled;
  for (const auto& s : samples) pooled.insert(pooled.end(), s.coords().begin(), s.coords().end());
  if (pooled.size() < 10000) throw DomainError("semicircle_compare: need at least 10^4 points");
  return ks_distance(std::move(pooled), [radius](double x) { return semicircle_cdf(x, radius); });
}

double semicircle_compare(std::span<const LabeledState> samples, std::size_t n) {
  if (n == 0) throw DomainError("semicircle_compare: N must be positive");
  return semicircle_compare_radius(samples, 2.0 * std::sqrt(static_cast<double>(n)));
}

}  // namespace dyson

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace dyson {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean with the i.i.d. standard error.
inline MeanSe mean_se(std::span<const double> v) {
  MeanSe out;
  const std::size_t n = v.size();
  if (n == 0) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

/// Batch-means standard error for a correlated sequence: the series is cut into
/// `batches` contiguous blocks and the spread of block means is used.
inline MeanSe batch_mean_se(std::span<const double> v, std::size_t batches = 20) {
  const std::size_t n = v.size();
  batches = std::min(batches, n);
  if (batches < 2) return mean_se(v);
  const std::size_t len = n / batches;
  double total = 0.0;
  for (double x : v) total += x;
  MeanSe out;
  out.mean = total / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += v[i];
    const double m = s / static_cast<double>(len);
    ss += (m - out.mean) * (m - out.mean);
  }
  out.se = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  return out;
}

/// (a - b) / sqrt(se_a^2 + se_b^2); 0 when both estimates are exact and equal.
inline double z_score(const MeanSe& a, const MeanSe& b) {
  const double d = a.mean - b.mean;
  const double s = std::hypot(a.se, b.se);
  if (s == 0.0) return d == 0.0 ? 0.0 : std::copysign(INFINITY, d);
  return d / s;
}

}  // namespace dyson

#include "dyson/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <utility>

#include "dyson/errors.hpp"

namespace dyson {

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence (n >= 1).
std::pair<double, double> legendre(std::size_t n, double z) {
  double p0 = 1.0;
  double p1 = z;
  for (std::size_t k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  return {p1, static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

QuadratureGrid gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  QuadratureGrid g;
  g.a = a;
  g.b = b;
  g.nodes.resize(n);
  g.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  if (n == 1) {
    g.nodes[0] = mid;
    g.weights[0] = b - a;
    return g;
  }
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre(n, z).second;
    const double w = half * 2.0 / ((1.0 - z * z) * dp * dp);
    g.nodes[i] = mid - half * z;
    g.nodes[n - 1 - i] = mid + half * z;
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return g;
}

QuadratureGrid composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b) {
  if (panels == 0) throw DomainError("composite_gauss_legendre: need at least one panel");
  QuadratureGrid out;
  out.a = a;
  out.b = b;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double hi = p + 1 == panels ? b : lo + width;
    auto g = gauss_legendre(n, lo, hi);
    out.nodes.insert(out.nodes.end(), g.nodes.begin(), g.nodes.end());
    out.weights.insert(out.weights.end(), g.weights.begin(), g.weights.end());
  }
  return out;
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    double rel_tol, std::size_t max_intervals) {
  if (a == b) return {};
  std::priority_queue<Segment> heap;
  auto first = gk15(f, a, b);
  heap.push(first);
  double total = first.value;
  double err = first.error;
  std::size_t evals = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.size() >= max_intervals) {
      throw ConvergenceError("integrate_adaptive: tolerance not reached (error estimate " + std::to_string(err) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = gk15(f, worst.a, mid);
    auto right = gk15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (!std::isfinite(total)) throw ConvergenceError("integrate_adaptive: non-finite integrand");
  }
  // Re-sum to shed accumulated update rounding.
  double sum = 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, evals};
}

QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol,
                                     int max_level) {
  if (a == b) return {};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  constexpr double kTMax = 4.0;
  const double pi2 = 0.5 * std::numbers::pi;

  // Contribution of abscissa +-t; complements computed directly to keep
  // resolution next to the endpoints.
  auto pair_sum = [&](double t, std::size_t& evals) {
    const double u = pi2 * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = half * pi2 * std::cosh(t) / (cu * cu);
    if (w == 0.0) return 0.0;
    const double comp = half * std::exp(-u) / cu;  // half * (1 - tanh u)
    double s = 0.0;
    const double xr = b - comp;
    const double xl = a + comp;
    if (xr != b) {
      s += f(xr);
      ++evals;
    }
    if (xl != a) {
      s += f(xl);
      ++evals;
    }
    return w * s;
  };

  std::size_t evals = 1;
  double sum = half * pi2 * f(mid);
  double h = 1.0;
  for (double t = h; t <= kTMax; t += h) sum += pair_sum(t, evals);
  double prev = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTMax; t += 2.0 * h) sum += pair_sum(t, evals);
    const double cur = h * sum;
    const double err = std::abs(cur - prev);
    if (level >= 3 && err <= tol * std::max(1.0, std::abs(cur))) return {cur, err, evals};
    prev = cur;
  }
  throw ConvergenceError("integrate_tanh_sinh: tolerance not reached");
}

}  // namespace dyson

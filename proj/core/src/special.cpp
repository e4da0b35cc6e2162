#include "dyson/special.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "dyson/errors.hpp"
#include "dyson/quadrature.hpp"

namespace dyson {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- Airy

constexpr double kAiryMin = -200.0;
constexpr double kAiryMax = 20.0;
constexpr double kTableLo = -12.0;
constexpr double kTableHi = 2.0;
constexpr double kTableStep = 0.25;

struct AiryNode {
  long double ai;
  long double dai;
};

// Taylor step of y'' = x y from x0 by h.
template <class T>
std::pair<T, T> airy_taylor(T x0, T y0, T dy0, T h) {
  T a_prev2 = 0;  // a_{n-1}
  T a_prev = y0;  // a_n with n = 0
  T a_cur = dy0;  // a_{n+1}
  T y = y0 + dy0 * h;
  T dy = dy0;
  T hp = h;  // h^(n+1)
  int small = 0;  // consecutive negligible terms; every third coefficient can vanish
  for (int n = 0; n < 120; ++n) {
    // a_{n+2} from a_n and a_{n-1}
    const T a_next = (x0 * a_prev + a_prev2) / static_cast<T>((n + 2) * (n + 1));
    const T term_dy = static_cast<T>(n + 2) * a_next * hp;
    hp *= h;
    const T term_y = a_next * hp;
    y += term_y;
    dy += term_dy;
    small = std::abs(term_y) + std::abs(term_dy) <= 1e-21L * (std::abs(y) + std::abs(dy)) ? small + 1 : 0;
    if (small == 3) break;
    a_prev2 = a_prev;
    a_prev = a_cur;
    a_cur = a_next;
  }
  return {y, dy};
}

const std::vector<AiryNode>& airy_table() {
  static const std::vector<AiryNode> table = [] {
    const int lo = static_cast<int>(std::lround(-kTableLo / kTableStep));
    const int hi = static_cast<int>(std::lround(kTableHi / kTableStep));
    std::vector<AiryNode> t(static_cast<std::size_t>(lo + hi + 1));
    // Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
    const long double ai0 = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
    const long double dai0 = -1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
    t[static_cast<std::size_t>(lo)] = {ai0, dai0};
    const long double h = kTableStep;
    for (int k = 1; k <= hi; ++k) {
      const auto& prev = t[static_cast<std::size_t>(lo + k - 1)];
      auto [y, dy] = airy_taylor<long double>((k - 1) * h, prev.ai, prev.dai, h);
      t[static_cast<std::size_t>(lo + k)] = {y, dy};
    }
    for (int k = 1; k <= lo; ++k) {
      const auto& prev = t[static_cast<std::size_t>(lo - k + 1)];
      auto [y, dy] = airy_taylor<long double>(-(k - 1) * h, prev.ai, prev.dai, -h);
      t[static_cast<std::size_t>(lo - k)] = {y, dy};
    }
    return t;
  }();
  return table;
}

AiryValue airy_table_eval(double x) {
  const auto& t = airy_table();
  const long k = std::lround((x - kTableLo) / kTableStep);
  const long double x0 = kTableLo + k * kTableStep;
  const auto& node = t[static_cast<std::size_t>(k)];
  auto [y, dy] = airy_taylor<long double>(x0, node.ai, node.dai, static_cast<long double>(x) - x0);
  return {static_cast<double>(y), static_cast<double>(dy)};
}

const QuadratureGrid& unit_gl16() {
  static const QuadratureGrid g = gauss_legendre(16, 0.0, 1.0);
  return g;
}

AiryValue airy_saddle(double x) {
  const double sx = std::sqrt(x);
  const double zeta = 2.0 / 3.0 * x * sx;
  const double smax = std::sqrt(46.0 / sx);
  const int panels = static_cast<int>(std::ceil(smax / 0.3));
  const double width = smax / panels;
  const auto& g = unit_gl16();
  double c = 0.0;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * width;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = lo + width * g.nodes[i];
      const double w = width * g.weights[i] * std::exp(-sx * t * t);
      const double ph = t * t * t / 3.0;
      c += w * std::cos(ph);
      s += w * t * std::sin(ph);
    }
  }
  const double pre = std::exp(-zeta) / kPi;
  return {pre * c, -pre * (sx * c + s)};
}

AiryValue airy_negative_asymptotic(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k, v_k coefficients; sums truncated at the smallest term.
  double u = 1.0;
  double pu_even = 1.0, pu_odd = 0.0, pv_even = 1.0, pv_odd = 0.0;
  double zk = 1.0;
  double last = 1.0;
  for (int k = 1; k < 40; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    zk *= zeta;
    const double tu = u / zk;
    const double tv = v / zk;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    // (-1)^m for index 2m / 2m+1
    const int m = k / 2;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      pu_even += sign * tu;
      pv_even += sign * tv;
    } else {
      pu_odd += sign * tu;
      pv_odd += sign * tv;
    }
    if (last < 1e-18) break;
  }
  const double phase = zeta - kPi / 4.0;
  const double cs = std::cos(phase);
  const double sn = std::sin(phase);
  const double z4 = std::pow(z, 0.25);
  const double ai = (cs * pu_even + sn * pu_odd) / (std::sqrt(kPi) * z4);
  const double dai = z4 * (sn * pv_even - cs * pv_odd) / std::sqrt(kPi);
  return {ai, dai};
}

// ---------------------------------------------------------------- Bessel

BesselValue bessel_series(double alpha, double x) {
  const double q = 0.25 * x * x;
  double term = std::pow(0.5 * x, alpha) / std::tgamma(alpha + 1.0);
  double j = 0.0;
  double dj = 0.0;
  for (int k = 0; k < 300; ++k) {
    j += term;
    dj += term * (2.0 * k + alpha);
    const double next = -term * q / ((k + 1.0) * (k + 1.0 + alpha));
    if (std::abs(next) < 1e-18 * std::abs(j) && k > 2) break;
    term = next;
  }
  return {j, dj / x};
}

// Hankel expansion of J_nu(x) for large x.
double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;  // a_k(nu) / x^k
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    a *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    if (std::abs(a) > last && k > 2) break;
    last = std::abs(a);
    const int m = k / 2;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * a;
    } else {
      q += sign * a;
    }
    if (last < 1e-17) break;
  }
  const double w = x - nu * kPi / 2.0 - kPi / 4.0;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(w) - q * std::sin(w));
}

BesselValue bessel_miller(double alpha, double x) {
  // j[m] ~ J_{alpha+m}(x) up to a common factor.
  const int top = 2 * static_cast<int>(std::ceil((x + 40.0 + 8.0 * std::cbrt(x)) / 2.0)) + 2;
  std::vector<double> j(static_cast<std::size_t>(top) + 2, 0.0);
  j[static_cast<std::size_t>(top)] = 1e-30;
  for (int m = top; m >= 1; --m) {
    const double nu = alpha + m;
    j[static_cast<std::size_t>(m) - 1] = 2.0 * nu / x * j[static_cast<std::size_t>(m)] - j[static_cast<std::size_t>(m) + 1];
    if (std::abs(j[static_cast<std::size_t>(m) - 1]) > 1e250) {
      for (auto& v : j) v *= 1e-250;
    }
  }
  // (x/2)^alpha = sum_k (alpha+2k) Gamma(alpha+k)/k! J_{alpha+2k}(x); weights
  // taken relative to Gamma(alpha+1).
  double weight = 1.0;
  double sum = j[0];
  for (int k = 1; 2 * k <= top; ++k) {
    weight *= (alpha + 2.0 * k) / (alpha + 2.0 * k - 2.0) * (alpha + k - 1.0) / k;
    sum += weight * j[2 * static_cast<std::size_t>(k)];
  }
  const double log_gamma = alpha < 170.0 ? std::log(std::tgamma(alpha + 1.0)) : std::lgamma(alpha + 1.0);
  const double target = std::exp(alpha * std::log(0.5 * x) - log_gamma);
  const double scale = target / sum;
  const double jv = j[0] * scale;
  const double jv1 = j[1] * scale;
  return {jv, alpha / x * jv - jv1};
}

}  // namespace

AiryValue airy(double x) {
  if (!(x >= kAiryMin && x <= kAiryMax)) {
    throw DomainError("airy: argument " + std::to_string(x) + " outside supported range [-200, 20]");
  }
  if (x > kTableHi) return airy_saddle(x);
  if (x >= kTableLo) return airy_table_eval(x);
  return airy_negative_asymptotic(x);
}

BesselValue bessel_j(double alpha, double x) {
  if (!(alpha >= 1.0)) throw DomainError("bessel_j: order must be >= 1");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: argument must be finite and >= 0");
  if (x == 0.0) return {0.0, alpha == 1.0 ? 0.5 : 0.0};
  if (x <= 12.0) return bessel_series(alpha, x);
  if (x >= 25.0 + 0.5 * alpha * alpha) {
    const double jv = bessel_hankel(alpha, x);
    const double jv1 = bessel_hankel(alpha + 1.0, x);
    return {jv, alpha / x * jv - jv1};
  }
  return bessel_miller(alpha, x);
}

PearceyValue pearcey_pq(double t, const PearceyOptions& opts) {
  if (!(std::abs(t) <= 10.0)) throw DomainError("pearcey_pq: |t| must be <= 10");
  if (opts.nodes < 16) throw DomainError("pearcey_pq: need at least 16 nodes");
  const std::size_t panels = static_cast<std::size_t>((opts.nodes + 15) / 16);
  PearceyValue out;

  // Q family on the real axis: exp(-s^4/4) * s^2 < 1e-26 beyond s = 4.
  {
    const auto g = composite_gauss_legendre(panels, 16, 0.0, 4.0);
    double c0 = 0.0, s1 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = g.nodes[i];
      const double w = g.weights[i] * std::exp(-0.25 * s * s * s * s);
      const double cs = std::cos(s * t);
      const double sn = std::sin(s * t);
      c0 += w * cs;
      s1 += w * s * sn;
      c2 += w * s * s * cs;
    }
    out.q = -c0 / kPi;
    out.dq = s1 / kPi;
    out.d2q = c2 / kPi;
  }

  // P family on the rays omega = e^{-i pi/4} (outgoing) and -omega.
  {
    const double growth = std::abs(t) / std::numbers::sqrt2;
    double rmax = 3.0;
    while (0.25 * std::pow(rmax, 4) - rmax * growth - 2.0 * std::log(rmax) < 45.0) rmax += 0.05;
    const auto g = composite_gauss_legendre(panels, 16, 0.0, rmax);
    const std::complex<double> omega = std::polar(1.0, -kPi / 4.0);
    std::array<std::complex<double>, 3> sum{};
    for (const std::complex<double> w_dir : {omega, -omega}) {
      std::array<std::complex<double>, 3> f{};
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes[i];
        const std::complex<double> e = g.weights[i] * std::exp(-0.25 * r * r * r * r + r * w_dir * t);
        f[0] += e;
        f[1] += r * e;
        f[2] += r * r * e;
      }
      std::complex<double> wp = w_dir;
      for (int k = 0; k < 3; ++k) {
        sum[static_cast<std::size_t>(k)] += wp * f[static_cast<std::size_t>(k)];
        wp *= w_dir;
      }
    }
    out.p = sum[0].imag() / kPi;
    out.dp = sum[1].imag() / kPi;
    out.d2p = sum[2].imag() / kPi;
  }
  return out;
}

}  // namespace dyson

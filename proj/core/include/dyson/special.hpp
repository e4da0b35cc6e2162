#pragma once

namespace dyson {

struct AiryValue {
  double ai = 0.0;
  double dai = 0.0;  ///< Ai'(x)
};

/// Airy function and derivative on the supported range [-200, 20].
///
/// Accuracy is about 1e-13 relative to the local envelope of Ai on [-40, 10]:
///  * [-12, 2]: Taylor re-expansion of y'' = x y around a table of nodes built by
///    marching from the closed-form values at 0 (the Maclaurin series itself
///    near the origin);
///  * (2, 20]: steepest-descent integral through the saddle at sqrt(x),
///    Ai(x) = e^{-zeta}/pi * int_0^inf exp(-sqrt(x) s^2) cos(s^3/3) ds;
///  * [-200, -12): Poincare asymptotic expansion in zeta = (2/3)|x|^{3/2}.
/// Throws DomainError outside the supported range.
AiryValue airy(double x);

struct BesselValue {
  double j = 0.0;
  double dj = 0.0;  ///< d/dx J_alpha(x)
};

/// J_alpha(x) and its derivative for alpha >= 1, x >= 0. Ascending series for
/// x <= 12, Hankel asymptotics for large x, Miller backward recurrence
/// (normalized by the Neumann series for (x/2)^alpha) in between.
BesselValue bessel_j(double alpha, double x);

/// Pearcey integrals
///   Q(y) = (i/2pi) int_{-i inf}^{i inf} exp(-u^4/4 - u y) du
///        = -(1/pi) int_0^inf exp(-s^4/4) cos(s y) ds,
///   P(x) = (1/2pi i) int_C exp(v^4/4 + v x) dv
/// with C the four rays ending/starting at 0 in directions e^{+-i pi/4},
/// e^{+-3i pi/4}. Q is even and P is odd.
struct PearceyValue {
  double p = 0.0, dp = 0.0, d2p = 0.0;
  double q = 0.0, dq = 0.0, d2q = 0.0;
};

struct PearceyOptions {
  /// Total Gauss-Legendre nodes per integral (split into 16-point panels).
  int nodes = 160;
};

/// Supported for |t| <= 10.
PearceyValue pearcey_pq(double t, const PearceyOptions& opts = {});

}  // namespace dyson

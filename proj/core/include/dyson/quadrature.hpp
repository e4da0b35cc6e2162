#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dyson {

/// Nodes and positive weights on [a, b]; weights sum to b - a.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureGrid gauss_legendre(std::size_t n, double a, double b);

/// `panels` equal panels with an n-point Gauss-Legendre rule on each.
QuadratureGrid composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;        ///< estimated absolute error
  std::size_t evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod. Throws ConvergenceError when the
/// tolerance max(abs_tol, rel_tol*|I|) is not met within `max_intervals`.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-12, double rel_tol = 1e-12,
                                    std::size_t max_intervals = 2000);

/// Double-exponential (tanh-sinh) rule with level refinement. Never evaluates
/// f at the endpoints, so integrable endpoint singularities are fine.
QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                                     double tol = 1e-13, int max_level = 12);

}  // namespace dyson

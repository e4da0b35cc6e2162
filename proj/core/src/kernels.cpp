#include "dyson/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dyson/errors.hpp"

namespace dyson {

namespace {

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const double kCbrt2 = std::cbrt(2.0);

double airy_diag(double x) {
  const auto a = airy(x);
  return a.dai * a.dai - x * a.ai * a.ai;
}

// Ai with the decaying tail beyond the supported range treated as 0.
double ai_or_zero(double z) { return z > 20.0 ? 0.0 : airy(z).ai; }

double bessel_diag(double alpha, double x) {
  if (x == 0.0) return 0.0;
  const double s = std::sqrt(x);
  const auto b = bessel_j(alpha, s);
  return 0.25 * (b.j * b.j * (1.0 - alpha * alpha / (s * s)) + b.dj * b.dj);
}

}  // namespace

double sine_kernel(double x, double y) {
  const double d = x - y;
  if (std::abs(d) < kNearDiagonal) return (1.0 - d * d / 6.0) / pi;
  return std::sin(d) / (pi * d);
}

double airy_kernel(double x, double y) {
  if (std::abs(x - y) < kNearDiagonal) return airy_diag(0.5 * (x + y));
  const auto ax = airy(x);
  const auto ay = airy(y);
  return (ax.ai * ay.dai - ax.dai * ay.ai) / (x - y);
}

double bessel_kernel(double alpha, double x, double y) {
  if (x < 0.0 || y < 0.0) throw DomainError("bessel_kernel: arguments must be nonnegative");
  if (std::abs(x - y) < kNearDiagonal) return bessel_diag(alpha, 0.5 * (x + y));
  const double sx = std::sqrt(x);
  const double sy = std::sqrt(y);
  const auto bx = bessel_j(alpha, sx);
  const auto by = bessel_j(alpha, sy);
  return (bx.j * sy * by.dj - sx * bx.dj * by.j) / (2.0 * (x - y));
}

std::complex<double> ginibre_kernel(std::complex<double> z, std::complex<double> w) {
  return std::exp(-0.5 * std::norm(z) - 0.5 * std::norm(w) + z * std::conj(w)) / pi;
}

double pearcey_kernel(double x, double y, const PearceyOptions& opts) {
  // With P and Q normalized as in special.hpp the bare difference quotient is
  // minus the correlation kernel (its diagonal would be a negative density).
  const auto py = pearcey_pq(y, opts);
  if (std::abs(x - y) < kNearDiagonal) {
    // Expansion of the numerator in x around y, with P''' = -xP and P'''' = -P - xP'.
    const double diag = py.dp * py.d2q - py.d2p * py.dq - y * py.p * py.q;
    const double slope = py.d2p * py.d2q + y * py.p * py.dq - (py.p + y * py.dp) * py.q;
    return -(diag + 0.5 * (x - y) * slope);
  }
  const auto px = pearcey_pq(x, opts);
  return -(px.p * py.d2q - px.dp * py.dq + px.d2p * py.q) / (x - y);
}

ResolventOperator::ResolventOperator(double length, std::size_t n) : ResolventOperator(airy_kernel, length, n) {}

ResolventOperator::ResolventOperator(const Kernel& kernel, double length, std::size_t n) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("nystrom_resolvent: length must be positive");
  if (n < 8) throw DomainError("nystrom_resolvent: need at least 8 nodes");
  grid_ = gauss_legendre(n, 0.0, length);
  k_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(grid_.nodes[i], grid_.nodes[j]);
      k_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  solve();
}

ResolventOperator ResolventOperator::zero(double length, std::size_t n) {
  ResolventOperator op(length, n);
  op.r_.setZero();
  op.residual_ = (op.k_).cwiseAbs().maxCoeff();
  return op;
}

void ResolventOperator::solve() {
  const auto n = k_.rows();
  Eigen::VectorXd sw(n);
  for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(grid_.weights[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd ks = sw.asDiagonal() * k_ * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ks, Eigen::EigenvaluesOnly);
  lambda_max_ = eig.eigenvalues().maxCoeff();
  condition_ = lambda_max_ < 1.0 ? 1.0 / (1.0 - lambda_max_) : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition)) {
    throw IllConditionedError("nystrom_resolvent: I - K is nearly singular (largest eigenvalue " +
                                  std::to_string(lambda_max_) + ")",
                              condition_);
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - ks;
  const Eigen::MatrixXd rs = a.ldlt().solve(ks);
  const Eigen::VectorXd isw = sw.cwiseInverse();
  r_ = isw.asDiagonal() * rs * isw.asDiagonal();
  r_ = 0.5 * (r_ + r_.transpose()).eval();

  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = grid_.weights[static_cast<std::size_t>(i)];
  residual_ = (r_ - k_ * w.asDiagonal() * r_ - k_).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd ResolventOperator::neumann(std::size_t terms) const {
  const auto n = k_.rows();
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = grid_.weights[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd kw = k_ * w.asDiagonal();
  Eigen::MatrixXd term = k_;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < terms; ++t) {
    sum += term;
    term = kw * term;
  }
  return sum;
}

TacnodeEvaluator::TacnodeEvaluator(std::shared_ptr<const ResolventOperator> resolvent, TacnodeTerms terms)
    : resolvent_(std::move(resolvent)), terms_(terms) {
  if (!resolvent_) throw DomainError("tacnode: resolvent required");
  const auto& g = resolvent_->grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd w(n);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i) = g.weights[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = ai_or_zero(g.nodes[static_cast<std::size_t>(i)] + g.nodes[static_cast<std::size_t>(j)]);
    }
  }
  const auto wd = w.asDiagonal();
  m2_ = wd * resolvent_->matrix() * wd;
  m3_ = wd * a * wd;
  m4_ = m2_ * a * wd;
}

std::array<double, 4> TacnodeEvaluator::l_terms(double x, double y) const {
  const auto& g = resolvent_->grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd ay(n), aty(n), bx(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double cu = kCbrt2 * g.nodes[static_cast<std::size_t>(i)];
    ay(i) = ai_or_zero(y + cu);
    aty(i) = ai_or_zero(-y + cu);
    bx(i) = ai_or_zero(x + cu);
  }
  std::array<double, 4> t{};
  if (terms_.airy) t[0] = airy_kernel(x, y);
  if (terms_.resolvent) t[1] = kCbrt2 * ay.dot(m2_ * bx);
  if (terms_.cross) t[2] = -kCbrt2 * aty.dot(m3_ * bx);
  if (terms_.mixed) t[3] = -kCbrt2 * aty.dot(m4_ * bx);
  return t;
}

double TacnodeEvaluator::l_tac(double x, double y) const {
  const auto t = l_terms(x, y);
  return t[0] + t[1] + t[2] + t[3];
}

double TacnodeEvaluator::operator()(double x, double y) const { return l_tac(x, y) + l_tac(-x, -y); }

TacnodeKernel TacnodeKernel::make(std::size_t n, double length) {
  auto r = std::make_shared<const ResolventOperator>(length, n);
  return TacnodeKernel{std::make_shared<const TacnodeEvaluator>(std::move(r))};
}

std::string kernel_name(const KernelModel& k) {
  return std::visit(overloaded{[](const SineKernel&) { return std::string("sine"); },
                               [](const AiryKernel&) { return std::string("airy"); },
                               [](const BesselKernel&) { return std::string("bessel"); },
                               [](const GinibreKernel&) { return std::string("ginibre"); },
                               [](const PearceyKernel&) { return std::string("pearcey"); },
                               [](const TacnodeKernel&) { return std::string("tacnode"); }},
                    k);
}

int kernel_dim(const KernelModel& k) { return std::holds_alternative<GinibreKernel>(k) ? 2 : 1; }

bool kernel_hermitian(const KernelModel& k) { return !std::holds_alternative<PearceyKernel>(k); }

double kernel_eval(const KernelModel& k, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("kernel_eval: arguments must be finite");
  return std::visit(overloaded{[&](const SineKernel&) { return sine_kernel(x, y); },
                               [&](const AiryKernel&) { return airy_kernel(x, y); },
                               [&](const BesselKernel& b) {
                                 if (!(b.alpha >= 1.0)) throw DomainError("bessel kernel: alpha must be >= 1");
                                 return bessel_kernel(b.alpha, x, y);
                               },
                               [&](const GinibreKernel&) -> double {
                                 throw DomainError("kernel_eval: the Ginibre kernel lives on the plane");
                               },
                               [&](const PearceyKernel& p) { return pearcey_kernel(x, y, p.options); },
                               [&](const TacnodeKernel& t) {
                                 if (!t.evaluator) throw DomainError("tacnode kernel: evaluator missing");
                                 return (*t.evaluator)(x, y);
                               }},
                    k);
}

std::complex<double> kernel_eval(const KernelModel& k, const Point& x, const Point& y) {
  if (kernel_dim(k) == 2) {
    if (x.dim() != 2 || y.dim() != 2) throw DomainError("kernel_eval: the Ginibre kernel needs 2D points");
    return ginibre_kernel({x.x(), x.y()}, {y.x(), y.y()});
  }
  if (x.dim() != 1 || y.dim() != 1) throw DomainError("kernel_eval: 1D points required");
  return kernel_eval(k, x.x(), y.x());
}

Eigen::MatrixXcd kernel_matrix(const KernelModel& k, std::span<const Point> pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd m(n, n);
  const bool sym = kernel_hermitian(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = sym ? i : 0; j < n; ++j) {
      m(i, j) = kernel_eval(k, pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
      if (sym && j != i) m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace dyson

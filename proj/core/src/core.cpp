#include "dyson/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyson/errors.hpp"

namespace dyson {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw DomainError("point coordinates must be finite");
}

void require_dim(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("dimension must be 1 or 2, got " + std::to_string(dim));
}

bool radial_less(const Point& a, const Point& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na != nb) return na < nb;
  return (a <=> b) == std::partial_ordering::less;
}

}  // namespace

Point::Point(double x) : c_{x, 0.0}, dim_(1) { require_finite(x); }

Point::Point(double x, double y) : c_{x, y}, dim_(2) {
  require_finite(x);
  require_finite(y);
}

double Point::norm() const noexcept { return dim_ == 1 ? std::abs(c_[0]) : std::hypot(c_[0], c_[1]); }

std::partial_ordering operator<=>(const Point& a, const Point& b) noexcept {
  if (auto c = a.c_[0] <=> b.c_[0]; c != 0) return c;
  return a.c_[1] <=> b.c_[1];
}

double distance(const Point& a, const Point& b) noexcept {
  if (a.dim() == 1) return std::abs(a.x() - b.x());
  return std::hypot(a.x() - b.x(), a.y() - b.y());
}

Configuration::Configuration(int dim, double window) : dim_(dim), window_(window) { require_dim(dim); }

Configuration::Configuration(std::vector<Point> points, int dim, double window)
    : points_(std::move(points)), dim_(dim), window_(window) {
  require_dim(dim);
  if (!(window > 0.0)) throw DomainError("configuration window must be positive");
  for (const auto& p : points_) {
    if (p.dim() != dim) throw DomainError("point dimension does not match configuration dimension");
  }
}

Configuration Configuration::from_1d(std::span<const double> xs, double window) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.emplace_back(x);
  return Configuration(std::move(pts), 1, window);
}

bool Configuration::is_simple(double tolerance) const {
  if (points_.size() < 2) return true;
  if (dim_ == 1) {
    std::vector<double> xs;
    xs.reserve(points_.size());
    for (const auto& p : points_) xs.push_back(p.x());
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (xs[i] - xs[i - 1] <= tolerance) return false;
    }
    return true;
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (distance(points_[i], points_[j]) <= tolerance) return false;
    }
  }
  return true;
}

bool equivalent(const Configuration& a, const Configuration& b) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  auto pa = a.points();
  auto pb = b.points();
  auto lex = [](const Point& p, const Point& q) { return (p <=> q) == std::partial_ordering::less; };
  std::sort(pa.begin(), pa.end(), lex);
  std::sort(pb.begin(), pb.end(), lex);
  return pa == pb;
}

LabeledState::LabeledState(std::vector<double> coords, int dim, LabelOrder order, double window)
    : coords_(std::move(coords)), dim_(dim), order_(order), window_(window) {
  require_dim(dim);
  if (coords_.size() % static_cast<std::size_t>(dim) != 0) {
    throw DomainError("coordinate count is not a multiple of the dimension");
  }
  for (double c : coords_) require_finite(c);
  const std::size_t n = size();
  if (order == LabelOrder::increasing) {
    if (dim != 1) throw DomainError("increasing order requires a 1D state");
    for (std::size_t i = 1; i < n; ++i) {
      if (!(coords_[i] > coords_[i - 1])) throw DomainError("increasing state is not strictly ordered");
    }
  } else if (order == LabelOrder::radial) {
    for (std::size_t i = 1; i < n; ++i) {
      if (radial_less(point(i), point(i - 1))) throw DomainError("radial state is not radially ordered");
    }
  }
}

LabeledState LabeledState::increasing(std::vector<double> xs, double window) {
  return LabeledState(std::move(xs), 1, LabelOrder::increasing, window);
}

Point LabeledState::point(std::size_t i) const {
  const std::size_t d = static_cast<std::size_t>(dim_);
  return dim_ == 1 ? Point(coords_[i]) : Point(coords_[i * d], coords_[i * d + 1]);
}

Configuration restrict(const Configuration& xi, double r) {
  if (!(r > 0.0)) throw DomainError("restriction radius must be positive");
  std::vector<Point> inside;
  for (const auto& p : xi.points()) {
    if (p.norm() < r) inside.push_back(p);
  }
  return Configuration(std::move(inside), xi.dim(), std::min(xi.window(), r));
}

Configuration restrict_complement(const Configuration& xi, double r) {
  if (!(r > 0.0)) throw DomainError("restriction radius must be positive");
  std::vector<Point> outside;
  for (const auto& p : xi.points()) {
    if (!(p.norm() < r)) outside.push_back(p);
  }
  return Configuration(std::move(outside), xi.dim(), xi.window());
}

LabeledState label(const Configuration& xi, LabelOrder order) {
  if (!xi.is_simple()) throw CollisionError("label: configuration is not simple (colliding particles)");
  if (order == LabelOrder::increasing && xi.dim() != 1) {
    throw DomainError("label: increasing order requires a 1D configuration");
  }
  auto pts = xi.points();
  if (order == LabelOrder::increasing) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x() < b.x(); });
  } else {
    std::sort(pts.begin(), pts.end(), radial_less);
  }
  std::vector<double> coords;
  coords.reserve(pts.size() * static_cast<std::size_t>(xi.dim()));
  for (const auto& p : pts) {
    coords.push_back(p.x());
    if (xi.dim() == 2) coords.push_back(p.y());
  }
  return LabeledState(std::move(coords), xi.dim(), order, xi.window());
}

Configuration unlabel(const LabeledState& x) {
  std::vector<Point> pts;
  pts.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) pts.push_back(x.point(i));
  return Configuration(std::move(pts), x.dim(), x.window());
}

double min_pair_distance(const LabeledState& x) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = x.size();
  if (x.dim() == 1 && x.order() == LabelOrder::increasing) {
    for (std::size_t i = 1; i < n; ++i) best = std::min(best, x[i] - x[i - 1]);
    return best;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, distance(x.point(i), x.point(j)));
  }
  return best;
}

}  // namespace dyson

#pragma once

// State vocabulary: points, finite configurations (unlabelled windows of a
// conceptually infinite configuration) and labelled coordinate sequences.

#include <array>
#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace dyson {

/// Two points within this absolute distance count as colliding.
inline constexpr double kCollisionTolerance = 1e-12;

inline constexpr double kUnboundedWindow = std::numeric_limits<double>::infinity();

/// A point of S in R^d, d in {1, 2}. Coordinates are always finite.
class Point {
 public:
  Point() = default;
  explicit Point(double x);
  Point(double x, double y);

  int dim() const noexcept { return dim_; }
  double x() const noexcept { return c_[0]; }
  double y() const noexcept { return c_[1]; }
  double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  double norm() const noexcept;

  friend bool operator==(const Point&, const Point&) = default;
  /// Lexicographic on coordinates.
  friend std::partial_ordering operator<=>(const Point& a, const Point& b) noexcept;

 private:
  std::array<double, 2> c_{0.0, 0.0};
  int dim_ = 1;
};

double distance(const Point& a, const Point& b) noexcept;

/// Finite point set. `window` is the radius up to which the data is known to be
/// complete (infinity for a genuinely finite configuration).
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int dim, double window = kUnboundedWindow);
  Configuration(std::vector<Point> points, int dim, double window = kUnboundedWindow);
  /// 1D convenience constructor.
  static Configuration from_1d(std::span<const double> xs, double window = kUnboundedWindow);

  int dim() const noexcept { return dim_; }
  double window() const noexcept { return window_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  /// No two points within kCollisionTolerance of each other.
  bool is_simple(double tolerance = kCollisionTolerance) const;

 private:
  std::vector<Point> points_;
  int dim_ = 1;
  double window_ = kUnboundedWindow;
};

/// Multiset equality of the point sets (order ignored, exact coordinates).
bool equivalent(const Configuration& a, const Configuration& b);

enum class LabelOrder {
  increasing,  ///< 1D, strictly increasing (Weyl chamber)
  radial,      ///< nondecreasing |x|, lexicographic tie-break
  tracked,     ///< labels follow particles; no order constraint (2D paths)
};

/// Ordered coordinate sequence. Storage is flat (size() * dim() doubles).
class LabeledState {
 public:
  LabeledState() = default;
  LabeledState(std::vector<double> coords, int dim, LabelOrder order,
               double window = kUnboundedWindow);
  /// 1D increasing state from coordinates (validated).
  static LabeledState increasing(std::vector<double> xs, double window = kUnboundedWindow);

  int dim() const noexcept { return dim_; }
  LabelOrder order() const noexcept { return order_; }
  double window() const noexcept { return window_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const noexcept { return coords_.empty(); }

  /// First coordinate of particle i (the coordinate itself in 1D).
  double operator[](std::size_t i) const noexcept { return coords_[i * static_cast<std::size_t>(dim_)]; }
  Point point(std::size_t i) const;
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const LabeledState&, const LabeledState&) = default;

 private:
  std::vector<double> coords_;
  int dim_ = 1;
  LabelOrder order_ = LabelOrder::increasing;
  double window_ = kUnboundedWindow;
};

/// pi_r: points with |x| < r. The result's window shrinks to min(window, r).
Configuration restrict(const Configuration& xi, double r);
/// pi_r^c: points with |x| >= r.
Configuration restrict_complement(const Configuration& xi, double r);

/// Canonical labelling of a simple configuration. Throws CollisionError otherwise.
LabeledState label(const Configuration& xi, LabelOrder order);
/// Forgets the order.
Configuration unlabel(const LabeledState& x);

/// Smallest pairwise distance (infinity for fewer than two points).
double min_pair_distance(const LabeledState& x);

}  // namespace dyson

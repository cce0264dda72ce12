#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nulldist {

/// Chart coordinates of a point on the base. One-dimensional bases use coords[0].
/// Interval: x in [-L/2, L/2]. Circle: arclength in [0, C).
/// FlatTorus: (x, y) in [0, L1) x [0, L2). RoundSphere: (polar, azimuth) in [0, pi] x [0, 2 pi).
struct BasePoint {
  std::array<double, 2> coords{0.0, 0.0};
  int dim = 1;

  static BasePoint line(double x) { return BasePoint{{x, 0.0}, 1}; }
  static BasePoint plane(double x, double y) { return BasePoint{{x, y}, 2}; }
  double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
  bool operator==(const BasePoint&) const = default;
};

enum class BaseKind { Interval, Circle, FlatTorus, RoundSphere };

/// Compact Riemannian base (Sigma, sigma) with closed-form distance.
class BaseManifold {
 public:
  static BaseManifold interval(double length);
  static BaseManifold circle(double circumference);
  static BaseManifold flat_torus(double l1, double l2);
  static BaseManifold round_sphere(double radius);

  BaseKind kind() const { return kind_; }
  int dimension() const;
  bool periodic() const { return kind_ == BaseKind::Circle || kind_ == BaseKind::FlatTorus; }

  /// First chart parameter: length, circumference, L1 or radius.
  double size() const { return a_; }
  double size2() const { return b_; }

  double volume() const;
  double diameter() const;
  std::string describe() const;

  bool contains(const BasePoint& p) const;
  /// Throws DomainError when p is outside the chart.
  void require(const BasePoint& p) const;
  /// Maps periodic coordinates back into the fundamental domain.
  BasePoint wrap(const BasePoint& p) const;

  double distance(const BasePoint& p, const BasePoint& q) const;
  /// Point at fraction s of a minimizing geodesic from p to q.
  /// Antipodal ties on periodic bases take the positive orientation.
  BasePoint interpolate(const BasePoint& p, const BasePoint& q, double s) const;

  /// Deterministic low-discrepancy sample; the seed only shifts the sequence.
  std::vector<BasePoint> sample(std::size_t n, std::uint64_t seed) const;

  bool operator==(const BaseManifold&) const = default;

 private:
  BaseManifold(BaseKind k, double a, double b) : kind_(k), a_(a), b_(b) {}
  BaseKind kind_;
  double a_;
  double b_;
};

double base_distance(const BaseManifold& base, const BasePoint& p, const BasePoint& q);
BasePoint geodesic_interpolate(const BaseManifold& base, const BasePoint& p, const BasePoint& q,
                               double s);
std::vector<BasePoint> sample_points(const BaseManifold& base, std::size_t n, std::uint64_t seed);

}  // namespace nulldist

#include "nulldist/base_geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

constexpr double kGolden = 0.6180339887498949;   // 1/phi
constexpr double kPlastic1 = 0.7548776662466927;  // 1/rho
constexpr double kPlastic2 = 0.5698402909980532;  // 1/rho^2

double frac(double x) { return x - std::floor(x); }

// Signed periodic difference in (-P/2, P/2]; exact antipodes map to +P/2.
double periodic_delta(double from, double to, double period) {
  double d = std::fmod(to - from, period);
  if (d <= -0.5 * period) d += period;
  if (d > 0.5 * period) d -= period;
  return d;
}

double wrap_into(double x, double period) {
  double w = std::fmod(x, period);
  if (w < 0.0) w += period;
  if (w >= period) w -= period;
  return w;
}

std::array<double, 3> sphere_unit(const BasePoint& p) {
  const double st = std::sin(p[0]);
  return {st * std::cos(p[1]), st * std::sin(p[1]), std::cos(p[0])};
}

BasePoint sphere_chart(const std::array<double, 3>& v) {
  const double polar = std::atan2(std::hypot(v[0], v[1]), v[2]);
  double az = std::atan2(v[1], v[0]);
  if (az < 0.0) az += 2.0 * std::numbers::pi;
  if (az >= 2.0 * std::numbers::pi) az = 0.0;
  return BasePoint::plane(polar, az);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw PreconditionError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

BaseManifold BaseManifold::interval(double length) {
  require_positive(length, "interval length");
  return {BaseKind::Interval, length, 0.0};
}

BaseManifold BaseManifold::circle(double circumference) {
  require_positive(circumference, "circumference");
  return {BaseKind::Circle, circumference, 0.0};
}

BaseManifold BaseManifold::flat_torus(double l1, double l2) {
  require_positive(l1, "torus side");
  require_positive(l2, "torus side");
  return {BaseKind::FlatTorus, l1, l2};
}

BaseManifold BaseManifold::round_sphere(double radius) {
  require_positive(radius, "sphere radius");
  return {BaseKind::RoundSphere, radius, 0.0};
}

int BaseManifold::dimension() const {
  return (kind_ == BaseKind::Interval || kind_ == BaseKind::Circle) ? 1 : 2;
}

double BaseManifold::volume() const {
  switch (kind_) {
    case BaseKind::Interval:
    case BaseKind::Circle:
      return a_;
    case BaseKind::FlatTorus:
      return a_ * b_;
    case BaseKind::RoundSphere:
      return 4.0 * std::numbers::pi * a_ * a_;
  }
  return 0.0;
}

double BaseManifold::diameter() const {
  switch (kind_) {
    case BaseKind::Interval:
      return a_;
    case BaseKind::Circle:
      return 0.5 * a_;
    case BaseKind::FlatTorus:
      return 0.5 * std::hypot(a_, b_);
    case BaseKind::RoundSphere:
      return std::numbers::pi * a_;
  }
  return 0.0;
}

std::string BaseManifold::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case BaseKind::Interval:
      os << "interval(" << a_ << ")";
      break;
    case BaseKind::Circle:
      os << "circle(" << a_ << ")";
      break;
    case BaseKind::FlatTorus:
      os << "flat_torus(" << a_ << "," << b_ << ")";
      break;
    case BaseKind::RoundSphere:
      os << "round_sphere(" << a_ << ")";
      break;
  }
  return os.str();
}

bool BaseManifold::contains(const BasePoint& p) const {
  if (p.dim != dimension()) return false;
  for (int i = 0; i < p.dim; ++i) {
    if (!std::isfinite(p[i])) return false;
  }
  switch (kind_) {
    case BaseKind::Interval:
      return p[0] >= -0.5 * a_ && p[0] <= 0.5 * a_;
    case BaseKind::Circle:
      return p[0] >= 0.0 && p[0] < a_;
    case BaseKind::FlatTorus:
      return p[0] >= 0.0 && p[0] < a_ && p[1] >= 0.0 && p[1] < b_;
    case BaseKind::RoundSphere:
      return p[0] >= 0.0 && p[0] <= std::numbers::pi && p[1] >= 0.0 &&
             p[1] < 2.0 * std::numbers::pi;
  }
  return false;
}

void BaseManifold::require(const BasePoint& p) const {
  if (!contains(p)) {
    std::ostringstream os;
    os << "point (" << p[0];
    if (p.dim == 2) os << ", " << p[1];
    os << ") is outside the chart of " << describe();
    throw DomainError(os.str());
  }
}

BasePoint BaseManifold::wrap(const BasePoint& p) const {
  switch (kind_) {
    case BaseKind::Interval:
      return p;
    case BaseKind::Circle:
      return BasePoint::line(wrap_into(p[0], a_));
    case BaseKind::FlatTorus:
      return BasePoint::plane(wrap_into(p[0], a_), wrap_into(p[1], b_));
    case BaseKind::RoundSphere:
      return sphere_chart(sphere_unit(p));
  }
  return p;
}

double BaseManifold::distance(const BasePoint& p, const BasePoint& q) const {
  require(p);
  require(q);
  switch (kind_) {
    case BaseKind::Interval:
      return std::abs(q[0] - p[0]);
    case BaseKind::Circle:
      return std::abs(periodic_delta(p[0], q[0], a_));
    case BaseKind::FlatTorus:
      return std::hypot(periodic_delta(p[0], q[0], a_), periodic_delta(p[1], q[1], b_));
    case BaseKind::RoundSphere: {
      const auto u = sphere_unit(p);
      const auto v = sphere_unit(q);
      const double cx = u[1] * v[2] - u[2] * v[1];
      const double cy = u[2] * v[0] - u[0] * v[2];
      const double cz = u[0] * v[1] - u[1] * v[0];
      const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
      return a_ * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
    }
  }
  return 0.0;
}

BasePoint BaseManifold::interpolate(const BasePoint& p, const BasePoint& q, double s) const {
  require(p);
  require(q);
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("interpolation parameter outside [0,1]");
  if (s == 0.0) return p;
  if (s == 1.0) return q;
  switch (kind_) {
    case BaseKind::Interval:
      return BasePoint::line(p[0] + s * (q[0] - p[0]));
    case BaseKind::Circle:
      return wrap(BasePoint::line(p[0] + s * periodic_delta(p[0], q[0], a_)));
    case BaseKind::FlatTorus:
      return wrap(BasePoint::plane(p[0] + s * periodic_delta(p[0], q[0], a_),
                                   p[1] + s * periodic_delta(p[1], q[1], b_)));
    case BaseKind::RoundSphere: {
      const auto u = sphere_unit(p);
      const auto v = sphere_unit(q);
      const double omega = distance(p, q) / a_;
      if (omega < 1e-15) return p;
      std::array<double, 3> w{};
      if (std::numbers::pi - omega < 1e-12) {
        // Antipodal: move along the meridian of increasing polar angle.
        const double ct = std::cos(p[0]);
        w = {ct * std::cos(p[1]), ct * std::sin(p[1]), -std::sin(p[0])};
      } else {
        const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        for (int i = 0; i < 3; ++i) w[i] = v[i] - dot * u[i];
        const double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        for (double& x : w) x /= n;
      }
      const double a = s * omega;
      std::array<double, 3> r{};
      for (int i = 0; i < 3; ++i) r[i] = std::cos(a) * u[i] + std::sin(a) * w[i];
      return sphere_chart(r);
    }
  }
  return p;
}

std::vector<BasePoint> BaseManifold::sample(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double o1 = seed == 0 ? 0.0 : unit(rng);
  const double o2 = seed == 0 ? 0.0 : unit(rng);
  std::vector<BasePoint> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    switch (kind_) {
      case BaseKind::Interval:
        out.push_back(BasePoint::line(-0.5 * a_ + a_ * frac(o1 + kk * kGolden)));
        break;
      case BaseKind::Circle:
        out.push_back(wrap(BasePoint::line(a_ * frac(o1 + kk * kGolden))));
        break;
      case BaseKind::FlatTorus:
        out.push_back(wrap(BasePoint::plane(a_ * frac(o1 + kk * kPlastic1),
                                            b_ * frac(o2 + kk * kPlastic2))));
        break;
      case BaseKind::RoundSphere: {
        const double z = 1.0 - (2.0 * kk + 1.0) / static_cast<double>(n);
        const double az = 2.0 * std::numbers::pi * frac(o1 + kk * kGolden);
        BasePoint p = BasePoint::plane(std::acos(z), az);
        out.push_back(contains(p) ? p : wrap(p));
        break;
      }
    }
  }
  return out;
}

double base_distance(const BaseManifold& base, const BasePoint& p, const BasePoint& q) {
  return base.distance(p, q);
}

BasePoint geodesic_interpolate(const BaseManifold& base, const BasePoint& p, const BasePoint& q,
                               double s) {
  return base.interpolate(p, q, s);
}

std::vector<BasePoint> sample_points(const BaseManifold& base, std::size_t n, std::uint64_t seed) {
  return base.sample(n, seed);
}

}  // namespace nulldist

#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nulldist/base_geometry.hpp"
#include "nulldist/expression.hpp"

namespace nulldist {

struct SpacetimePoint {
  double t = 0.0;
  BasePoint x;

  static SpacetimePoint on_line(double t, double x) { return {t, BasePoint::line(x)}; }
  bool operator==(const SpacetimePoint&) const = default;
};

/// Removed closed set in a spacetime with a one-dimensional base: the horizontal
/// segment {t} x [x_lo, x_hi]; a point when x_lo == x_hi.
struct Excision {
  double t = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;

  static Excision point(double t, double x) { return {t, x, x}; }
  static Excision segment(double t, double x_lo, double x_hi) { return {t, x_lo, x_hi}; }
  bool is_point() const { return x_lo == x_hi; }
  bool operator==(const Excision&) const = default;
};

/// Positive continuous warping f on the time interval, with declared bounds.
/// Bounds left as NaN are filled in from the audit grid when a spacetime is built.
struct WarpingFunction {
  std::function<double(double)> f;
  double f_min = std::numeric_limits<double>::quiet_NaN();
  double f_max = std::numeric_limits<double>::quiet_NaN();
  std::string label;
  std::vector<double> breakpoints;  // kinks or branch changes, used to split quadrature
  bool constant_one = false;

  double operator()(double t) const { return f(t); }

  static WarpingFunction constant(double c);
  static WarpingFunction one() { return constant(1.0); }
  static WarpingFunction custom(std::function<double(double)> f, double f_min, double f_max,
                                std::string label);
  static WarpingFunction expression(const std::string& expr, std::optional<double> f_min,
                                    std::optional<double> f_max);
  /// t^2 + 1, bounds derived from the interval.
  static WarpingFunction quadratic();
  /// 1 + sin(t)/j.
  static WarpingFunction uniform_sine(int j);
  /// Thin band of width 1/j at t = 0 where f equals h0 (h0 < 1 pinches, h0 > 1 widens).
  static WarpingFunction band(double h0, int j);
  /// f_j = 1/j below 1 - 1/j, smoothstep up to 1 at t = 1, then 1.
  static WarpingFunction collapse(int j);
};

/// C^3 smoothstep 3u^2 - 2u^3 clamped to [0,1].
double smoothstep(double u);

/// Time function tau(t, x) = phi(t). Generalized kinds may jump.
class TimeFunction {
 public:
  enum class Kind { Canonical, Smooth, Generalized };

  static TimeFunction canonical();
  static TimeFunction scaled(double c);
  static TimeFunction cube();
  /// t + t^3 / 3.
  static TimeFunction cubic_shift();
  /// t+1 above 0, 0 at 0, t-1 below.
  static TimeFunction step();
  /// t below 0, sqrt(t) on [0,1], sqrt(t) + 1 above 1.
  static TimeFunction sqrt_jump();
  /// sign(t) sqrt(|t|).
  static TimeFunction sqrt_reshaped();
  static TimeFunction smooth(std::function<double(double)> phi, std::string label);
  static TimeFunction from_expression(const std::string& expr);
  static TimeFunction generalized(std::function<double(double)> phi, std::vector<double> jumps,
                                  std::string label);

  Kind kind() const { return kind_; }
  bool canonical_kind() const { return kind_ == Kind::Canonical; }
  bool continuous() const { return jumps_.empty(); }
  /// Affine in t with positive slope; null length can then be summed exactly.
  std::optional<double> affine_slope() const { return affine_slope_; }
  const std::string& label() const { return label_; }
  const std::vector<double>& jumps() const { return jumps_; }

  double operator()(double t) const { return phi_(t); }
  /// tau(b) - tau(a), evaluated without cancellation where a closed form allows it.
  double increment(double a, double b) const { return delta_ ? delta_(a, b) : phi_(b) - phi_(a); }
  /// Smallest difference quotient of the continuous part on [a,b] (grid estimate).
  double min_slope(double a, double b, int samples = 2000) const;

 private:
  TimeFunction(Kind k, std::function<double(double)> phi,
               std::function<double(double, double)> delta, std::vector<double> jumps,
               std::string label, std::optional<double> affine)
      : kind_(k),
        phi_(std::move(phi)),
        delta_(std::move(delta)),
        jumps_(std::move(jumps)),
        label_(std::move(label)),
        affine_slope_(affine) {}

  Kind kind_;
  std::function<double(double)> phi_;
  std::function<double(double, double)> delta_;
  std::vector<double> jumps_;
  std::string label_;
  std::optional<double> affine_slope_;
};

/// Conformal factor psi(t) multiplying the whole metric.
struct ConformalFactor {
  std::function<double(double)> psi;
  std::string label;
};

enum class CausalOrder { Before, After, None };

/// g = psi(t)^2 (-dt^2 + f(t)^2 sigma) on I x Sigma.
class WarpedSpacetime {
 public:
  WarpedSpacetime(double t0, double t1, BaseManifold base, WarpingFunction warping,
                  std::optional<ConformalFactor> conformal = std::nullopt);

  static WarpedSpacetime product(double t0, double t1, BaseManifold base) {
    return {t0, t1, std::move(base), WarpingFunction::one()};
  }

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double duration() const { return t1_ - t0_; }
  const BaseManifold& base() const { return base_; }
  const WarpingFunction& warping() const { return warping_; }
  const std::optional<ConformalFactor>& conformal() const { return conformal_; }
  double f_min() const { return warping_.f_min; }
  double f_max() const { return warping_.f_max; }
  bool is_product() const { return warping_.constant_one; }

  /// Same causal structure, metric multiplied by psi^2.
  WarpedSpacetime rescaled(ConformalFactor psi) const;
  WarpedSpacetime with_warping(WarpingFunction w) const;

  /// Base speed of null curves at time t, 1/f(t); the conformal factor drops out.
  double null_speed(double t) const;

  bool contains(const SpacetimePoint& p) const;
  void require(const SpacetimePoint& p) const;

  /// Base distance a causal curve can cover between times a and b: int |dt| / f.
  double causal_reach(double a, double b) const;
  /// Time t >= a with causal_reach(a, t) == r, or nullopt if r overshoots t1.
  std::optional<double> time_after_reach(double a, double r) const;

  /// p <= q: t_p <= t_q and d_sigma(p, q) <= causal_reach(t_p, t_q).
  bool causally_precedes(const SpacetimePoint& p, const SpacetimePoint& q) const;
  bool is_causally_related(const SpacetimePoint& p, const SpacetimePoint& q) const;
  /// Before when p <= q (including p == q), After when q <= p, otherwise None.
  CausalOrder causal_order(const SpacetimePoint& p, const SpacetimePoint& q) const;
  /// d_sigma - reach; positive for non-causal pairs.
  double cone_excess(const SpacetimePoint& p, const SpacetimePoint& q) const;

  std::string describe() const;

 private:
  double integrate_speed(double a, double b) const;

  double t0_;
  double t1_;
  BaseManifold base_;
  WarpingFunction warping_;
  std::optional<ConformalFactor> conformal_;
  std::vector<double> splits_;
};

double causal_reach(const WarpedSpacetime& st, double a, double b);
bool is_causally_related(const WarpedSpacetime& st, const SpacetimePoint& p,
                         const SpacetimePoint& q);
/// tau(p), rejecting points outside the spacetime.
double evaluate_time(const WarpedSpacetime& st, const TimeFunction& tf, const SpacetimePoint& p);

/// Registry names accepted by the scenario loader.
std::vector<std::string> warping_registry_names();
std::vector<std::string> time_function_registry_names();
TimeFunction time_function_by_name(const std::string& name);

}  // namespace nulldist

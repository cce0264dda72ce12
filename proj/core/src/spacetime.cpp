#include "nulldist/spacetime.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

constexpr int kAuditSamples = 10000;
constexpr double kAuditSlack = 1e-9;
constexpr double kReachTolerance = 1e-9;
constexpr double kCausalSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Difference of square roots without cancellation.
double sqrt_delta(double a, double b) {
  const double s = std::sqrt(a) + std::sqrt(b);
  return s == 0.0 ? 0.0 : (b - a) / s;
}

}  // namespace

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

WarpingFunction WarpingFunction::constant(double c) {
  if (!(c > 0.0)) throw PreconditionError("warping constant must be positive");
  WarpingFunction w;
  w.f = [c](double) { return c; };
  w.f_min = c;
  w.f_max = c;
  w.label = c == 1.0 ? "one" : "constant(" + fmt(c) + ")";
  w.constant_one = (c == 1.0);
  return w;
}

WarpingFunction WarpingFunction::custom(std::function<double(double)> f, double f_min,
                                        double f_max, std::string label) {
  WarpingFunction w;
  w.f = std::move(f);
  w.f_min = f_min;
  w.f_max = f_max;
  w.label = std::move(label);
  return w;
}

WarpingFunction WarpingFunction::expression(const std::string& expr, std::optional<double> f_min,
                                            std::optional<double> f_max) {
  Expression e = Expression::parse(expr);
  WarpingFunction w;
  w.f = [e](double t) { return e(t); };
  w.f_min = f_min.value_or(std::numeric_limits<double>::quiet_NaN());
  w.f_max = f_max.value_or(std::numeric_limits<double>::quiet_NaN());
  w.label = "expr(" + expr + ")";
  return w;
}

WarpingFunction WarpingFunction::quadratic() {
  WarpingFunction w;
  w.f = [](double t) { return t * t + 1.0; };
  w.label = "t^2+1";
  return w;
}

WarpingFunction WarpingFunction::uniform_sine(int j) {
  if (j < 1) throw PreconditionError("sequence index must be >= 1");
  const double jj = j;
  WarpingFunction w;
  w.f = [jj](double t) { return 1.0 + std::sin(t) / jj; };
  w.f_min = 1.0 - 1.0 / jj;
  w.f_max = 1.0 + 1.0 / jj;
  if (j == 1) w.f_min = std::nextafter(0.0, 1.0);
  w.label = "uniform_sine(j=" + std::to_string(j) + ")";
  return w;
}

WarpingFunction WarpingFunction::band(double h0, int j) {
  if (!(h0 > 0.0) || h0 == 1.0) throw PreconditionError("band height must be positive and != 1");
  if (j < 1) throw PreconditionError("sequence index must be >= 1");
  const double jj = j;
  WarpingFunction w;
  w.f = [h0, jj](double t) {
    const double u = jj * t;
    if (u <= 0.5) return h0;
    if (u >= 1.0) return 1.0;
    return h0 + (1.0 - h0) * smoothstep(2.0 * u - 1.0);
  };
  w.f_min = std::min(h0, 1.0);
  w.f_max = std::max(h0, 1.0);
  w.label = "band(h0=" + fmt(h0) + ",j=" + std::to_string(j) + ")";
  w.breakpoints = {0.5 / jj, 1.0 / jj};
  return w;
}

WarpingFunction WarpingFunction::collapse(int j) {
  if (j < 1) throw PreconditionError("sequence index must be >= 1");
  const double jj = j;
  WarpingFunction w;
  w.f = [jj](double t) {
    if (t >= 1.0) return 1.0;
    const double low = 1.0 / jj;
    return low + (1.0 - low) * smoothstep(jj * t - (jj - 1.0));
  };
  w.f_min = 1.0 / jj;
  w.f_max = 1.0;
  w.label = "collapse(j=" + std::to_string(j) + ")";
  w.breakpoints = {1.0 - 1.0 / jj, 1.0};
  return w;
}

TimeFunction TimeFunction::canonical() {
  return {Kind::Canonical, [](double t) { return t; }, [](double a, double b) { return b - a; }, {},
          "canonical", 1.0};
}

TimeFunction TimeFunction::scaled(double c) {
  if (!(c > 0.0)) throw PreconditionError("time function scale must be positive");
  return {Kind::Smooth, [c](double t) { return c * t; },
          [c](double a, double b) { return c * (b - a); }, {}, "scaled(" + fmt(c) + ")", c};
}

TimeFunction TimeFunction::cube() {
  return {Kind::Smooth, [](double t) { return t * t * t; },
          [](double a, double b) { return (b - a) * (a * a + a * b + b * b); }, {}, "cube",
          std::nullopt};
}

TimeFunction TimeFunction::cubic_shift() {
  return {Kind::Smooth, [](double t) { return t + t * t * t / 3.0; },
          [](double a, double b) { return (b - a) * (1.0 + (a * a + a * b + b * b) / 3.0); }, {},
          "cubic_shift", std::nullopt};
}

TimeFunction TimeFunction::step() {
  auto phi = [](double t) {
    if (t > 0.0) return t + 1.0;
    if (t < 0.0) return t - 1.0;
    return 0.0;
  };
  return {Kind::Generalized, phi, {}, {0.0}, "step", std::nullopt};
}

TimeFunction TimeFunction::sqrt_jump() {
  auto phi = [](double t) {
    if (t <= 0.0) return t;
    if (t <= 1.0) return std::sqrt(t);
    return std::sqrt(t) + 1.0;
  };
  auto branch = [](double t) { return t <= 0.0 ? 0 : (t <= 1.0 ? 1 : 2); };
  auto delta = [phi, branch](double a, double b) {
    const int ba = branch(a);
    if (ba != 0 && ba == branch(b)) return sqrt_delta(a, b);
    return phi(b) - phi(a);
  };
  return {Kind::Generalized, phi, delta, {1.0}, "sqrt_jump", std::nullopt};
}

TimeFunction TimeFunction::sqrt_reshaped() {
  auto phi = [](double t) { return t >= 0.0 ? std::sqrt(t) : -std::sqrt(-t); };
  auto delta = [phi](double a, double b) {
    if (a >= 0.0 && b >= 0.0) return sqrt_delta(a, b);
    if (a <= 0.0 && b <= 0.0) return sqrt_delta(-b, -a);
    return phi(b) - phi(a);
  };
  return {Kind::Smooth, phi, delta, {}, "sqrt_reshaped", std::nullopt};
}

TimeFunction TimeFunction::smooth(std::function<double(double)> phi, std::string label) {
  return {Kind::Smooth, std::move(phi), {}, {}, std::move(label), std::nullopt};
}

TimeFunction TimeFunction::from_expression(const std::string& expr) {
  Expression e = Expression::parse(expr);
  return smooth([e](double t) { return e(t); }, "expr(" + expr + ")");
}

TimeFunction TimeFunction::generalized(std::function<double(double)> phi,
                                       std::vector<double> jumps, std::string label) {
  std::sort(jumps.begin(), jumps.end());
  return {Kind::Generalized, std::move(phi), {}, std::move(jumps), std::move(label), std::nullopt};
}

double TimeFunction::min_slope(double a, double b, int samples) const {
  if (affine_slope_) return *affine_slope_;
  double best = std::numeric_limits<double>::infinity();
  const double h = (b - a) / samples;
  for (int i = 0; i < samples; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == samples) ? b : lo + h;
    bool crosses = false;
    for (double j : jumps_) crosses = crosses || (j >= lo && j <= hi);
    if (crosses) continue;
    best = std::min(best, increment(lo, hi) / (hi - lo));
  }
  return best;
}

WarpedSpacetime::WarpedSpacetime(double t0, double t1, BaseManifold base, WarpingFunction warping,
                                 std::optional<ConformalFactor> conformal)
    : t0_(t0), t1_(t1), base_(std::move(base)), warping_(std::move(warping)),
      conformal_(std::move(conformal)) {
  if (!(t1_ > t0_) || !std::isfinite(t0_) || !std::isfinite(t1_)) {
    throw PreconditionError("time interval must satisfy t0 < t1");
  }
  if (!warping_.f) throw PreconditionError("warping function is empty");

  const bool derive_min = std::isnan(warping_.f_min);
  const bool derive_max = std::isnan(warping_.f_max);
  std::vector<double> grid;
  grid.reserve(kAuditSamples + 1 + warping_.breakpoints.size());
  for (int i = 0; i <= kAuditSamples; ++i) {
    grid.push_back(t0_ + (t1_ - t0_) * static_cast<double>(i) / kAuditSamples);
  }
  for (double b : warping_.breakpoints) {
    if (b > t0_ && b < t1_) grid.push_back(b);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double t : grid) {
    const double v = warping_.f(t);
    if (!std::isfinite(v)) throw PreconditionError("warping is not finite at t = " + fmt(t));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (derive_min) warping_.f_min = lo;
  if (derive_max) warping_.f_max = hi;
  if (!(warping_.f_min > 0.0)) {
    throw PreconditionError("warping " + warping_.label + " is not bounded away from zero");
  }
  if (lo < warping_.f_min - kAuditSlack || hi > warping_.f_max + kAuditSlack) {
    throw PreconditionError("warping " + warping_.label + " leaves its declared bounds [" +
                            fmt(warping_.f_min) + ", " + fmt(warping_.f_max) + "]: observed [" +
                            fmt(lo) + ", " + fmt(hi) + "]");
  }
  if (conformal_) {
    for (double t : grid) {
      const double p = conformal_->psi(t);
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw PreconditionError("conformal factor must be positive on the interval");
      }
    }
  }
  splits_.push_back(t0_);
  for (double b : warping_.breakpoints) {
    if (b > t0_ && b < t1_) splits_.push_back(b);
  }
  splits_.push_back(t1_);
  std::sort(splits_.begin(), splits_.end());
}

WarpedSpacetime WarpedSpacetime::rescaled(ConformalFactor psi) const {
  return {t0_, t1_, base_, warping_, std::move(psi)};
}

WarpedSpacetime WarpedSpacetime::with_warping(WarpingFunction w) const {
  return {t0_, t1_, base_, std::move(w), conformal_};
}

// psi^2 (-dt^2 + f^2 dx^2) = 0 gives |dx/dt| = 1/f for any positive psi.
double WarpedSpacetime::null_speed(double t) const { return 1.0 / warping_.f(t); }

bool WarpedSpacetime::contains(const SpacetimePoint& p) const {
  return std::isfinite(p.t) && p.t >= t0_ && p.t <= t1_ && base_.contains(p.x);
}

void WarpedSpacetime::require(const SpacetimePoint& p) const {
  if (!(std::isfinite(p.t) && p.t >= t0_ && p.t <= t1_)) {
    throw DomainError("time " + fmt(p.t) + " is outside [" + fmt(t0_) + ", " + fmt(t1_) + "]");
  }
  base_.require(p.x);
}

double WarpedSpacetime::integrate_speed(double a, double b) const {
  if (a == b) return 0.0;
  if (warping_.constant_one) return b - a;
  auto g = [this](double t) { return null_speed(t); };
  double total = 0.0;
  double lo = a;
  for (std::size_t i = 1; i < splits_.size() && lo < b; ++i) {
    if (splits_[i] <= lo) continue;
    const double hi = std::min(b, splits_[i]);
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, lo, hi, 20,
                                                                     kReachTolerance, &err);
    if (!std::isfinite(v) || err > 1e3 * kReachTolerance * std::max(1.0, std::abs(v))) {
      throw NumericError("causal reach quadrature did not converge on [" + fmt(lo) + ", " +
                         fmt(hi) + "], error estimate " + fmt(err));
    }
    total += v;
    lo = hi;
  }
  return total;
}

double WarpedSpacetime::causal_reach(double a, double b) const {
  for (double t : {a, b}) {
    if (!(t >= t0_ && t <= t1_)) {
      throw DomainError("time " + fmt(t) + " is outside [" + fmt(t0_) + ", " + fmt(t1_) + "]");
    }
  }
  return a <= b ? integrate_speed(a, b) : integrate_speed(b, a);
}

std::optional<double> WarpedSpacetime::time_after_reach(double a, double r) const {
  if (r < 0.0) throw PreconditionError("reach must be non-negative");
  if (r == 0.0) return a;
  const double total = causal_reach(a, t1_);
  if (r > total) return std::nullopt;
  if (r == total) return t1_;
  double lo = a;
  double hi = t1_;
  double t = std::min(t1_, a + r / null_speed(a));
  double reach_t = causal_reach(a, t);
  for (int it = 0; it < 200; ++it) {
    const double residual = r - reach_t;
    if (std::abs(residual) <= 1e-14 * std::max(1.0, r)) return t;
    if (residual > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    double next = t + residual / null_speed(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    reach_t += (next >= t) ? integrate_speed(t, next) : -integrate_speed(next, t);
    t = next;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      return t;
    }
  }
  throw NumericError("inverse reach did not converge from t = " + fmt(a) + " for r = " + fmt(r));
}

bool WarpedSpacetime::causally_precedes(const SpacetimePoint& p, const SpacetimePoint& q) const {
  require(p);
  require(q);
  if (p.t > q.t) return false;
  const double reach = causal_reach(p.t, q.t);
  return base_.distance(p.x, q.x) <= reach + kCausalSlack * std::max(1.0, reach);
}

bool WarpedSpacetime::is_causally_related(const SpacetimePoint& p, const SpacetimePoint& q) const {
  return causally_precedes(p, q) || causally_precedes(q, p);
}

CausalOrder WarpedSpacetime::causal_order(const SpacetimePoint& p, const SpacetimePoint& q) const {
  if (causally_precedes(p, q)) return CausalOrder::Before;
  if (causally_precedes(q, p)) return CausalOrder::After;
  return CausalOrder::None;
}

double WarpedSpacetime::cone_excess(const SpacetimePoint& p, const SpacetimePoint& q) const {
  require(p);
  require(q);
  return base_.distance(p.x, q.x) - causal_reach(p.t, q.t);
}

std::string WarpedSpacetime::describe() const {
  std::string s = "[" + fmt(t0_) + "," + fmt(t1_) + "] x " + base_.describe() + ", f = " +
                  warping_.label;
  if (conformal_) s += ", psi = " + conformal_->label;
  return s;
}

double causal_reach(const WarpedSpacetime& st, double a, double b) {
  return st.causal_reach(a, b);
}

bool is_causally_related(const WarpedSpacetime& st, const SpacetimePoint& p,
                         const SpacetimePoint& q) {
  return st.is_causally_related(p, q);
}

double evaluate_time(const WarpedSpacetime& st, const TimeFunction& tf, const SpacetimePoint& p) {
  st.require(p);
  return tf(p.t);
}

std::vector<std::string> warping_registry_names() {
  return {"one", "constant", "t2plus1", "uniform_sine", "example51", "example52", "example53"};
}

std::vector<std::string> time_function_registry_names() {
  return {"canonical", "scaled2", "cube", "cubic_shift", "step", "sqrt_jump", "sqrt_reshaped"};
}

TimeFunction time_function_by_name(const std::string& name) {
  if (name == "canonical") return TimeFunction::canonical();
  if (name == "scaled2") return TimeFunction::scaled(2.0);
  if (name == "cube") return TimeFunction::cube();
  if (name == "cubic_shift") return TimeFunction::cubic_shift();
  if (name == "step") return TimeFunction::step();
  if (name == "sqrt_jump") return TimeFunction::sqrt_jump();
  if (name == "sqrt_reshaped") return TimeFunction::sqrt_reshaped();
  throw ParseError("unknown time function '" + name + "'");
}

}  // namespace nulldist

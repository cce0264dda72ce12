#include "nulldist/causal_curves.hpp"

#include <cmath>
#include <utility>

#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

constexpr double kGapTolerance = 1e-12;
constexpr double kCausalSlack = 1e-8;

using RPoint = std::pair<Rational, Rational>;  // (x, t)

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

Rational pow_inv(std::int64_t base, int k) {
  Rational::Int d = 1;
  for (int i = 0; i < k; ++i) d *= base;
  return {Rational::Int{1}, d};
}

void push_unique(std::vector<RPoint>& pts, const RPoint& p) {
  if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
}

std::vector<RPoint> timelike2_points(int i) {
  std::vector<RPoint> pts{{0, 0}, {Rational(1, 2), Rational(3, 2)}, {1, 1}};
  const Rational half(1, 2);
  for (int level = 1; level < i; ++level) {
    std::vector<RPoint> next;
    next.reserve(2 * pts.size());
    for (const auto& [x, t] : pts) push_unique(next, {x * half, t * half});
    for (const auto& [x, t] : pts) push_unique(next, {x * half + half, t * half + half});
    pts = std::move(next);
  }
  return pts;
}

std::vector<RPoint> null5_points(int i) {
  const Rational c = pow_inv(3, i - 1);
  const Rational a = pow_inv(2, i - 1);
  std::vector<Rational> starts{0};
  Rational size(1);
  for (int level = 1; level < i; ++level) {
    std::vector<Rational> next;
    next.reserve(2 * starts.size());
    for (const Rational& s : starts) {
      next.push_back(s);
      next.push_back(s + size * Rational(2, 3));
    }
    starts = std::move(next);
    size = size * Rational(1, 3);
  }
  const Rational third = c * Rational(1, 3);
  std::vector<RPoint> pts{{0, 0}};
  auto excursion = [&](const Rational& s) {
    push_unique(pts, {s, s});
    push_unique(pts, {s - a, s + a});
    push_unique(pts, {s - a + third, s + a + third});
    push_unique(pts, {s + third, s + third});
  };
  for (const Rational& s : starts) {
    excursion(s);
    excursion(s + third * Rational(2));
    push_unique(pts, {s + c, s + c});
  }
  push_unique(pts, {1, 1});
  return pts;
}

std::vector<RPoint> sqrt_points(int i) {
  std::vector<RPoint> pts{{-1, 1}, {0, 0}, {1, 1}};
  const Rational half(1, 2);
  for (int level = 1; level < i; ++level) {
    std::vector<RPoint> next;
    next.reserve(2 * pts.size());
    for (const auto& [x, t] : pts) push_unique(next, {(x - 1) * half, (t + 1) * half});
    for (const auto& [x, t] : pts) push_unique(next, {(x + 1) * half, (t + 1) * half});
    pts = std::move(next);
  }
  return pts;
}

std::vector<RPoint> removed_point_points(int i) {
  const Rational e = pow_inv(2, i);
  return {{0, 0}, {Rational(2) - e, Rational(2) + e}, {2, 2}};
}

std::vector<RPoint> removed_line_points(int i) {
  const Rational e = pow_inv(2, i);
  const Rational h = pow_inv(2, i + 1);
  return {{0, 0}, {h, h}, {e, 0}, {Rational(1) + e, 1}, {e, 2}, {h, Rational(2) - h}, {0, 2}};
}

std::size_t predicted_segments(const std::string& name, int i) {
  const double p = std::ldexp(1.0, i);
  if (name == "null_5") return static_cast<std::size_t>(std::min(9.0 * p, 1e18));
  if (name == "timelike_2" || name == "sqrt_nonattained") {
    return static_cast<std::size_t>(std::min(p, 1e18));
  }
  return 8;
}

PiecewiseCausalCurve curve_from(const std::vector<RPoint>& pts) {
  std::vector<SpacetimePoint> verts;
  std::vector<Rational> times;
  verts.reserve(pts.size());
  times.reserve(pts.size());
  for (const auto& [x, t] : pts) {
    verts.push_back(SpacetimePoint::on_line(t.to_double(), x.to_double()));
    times.push_back(t);
  }
  PiecewiseCausalCurve c = PiecewiseCausalCurve::through(verts);
  c.set_exact_times(std::move(times));
  return c;
}

}  // namespace

CausalSegment make_segment(const SpacetimePoint& a, const SpacetimePoint& b) {
  return {b.t >= a.t ? Direction::Future : Direction::Past, a.t, b.t, a.x, b.x};
}

PiecewiseCausalCurve PiecewiseCausalCurve::through(const std::vector<SpacetimePoint>& vertices) {
  if (vertices.size() < 2) throw PreconditionError("a curve needs at least two vertices");
  std::vector<CausalSegment> segs;
  segs.reserve(vertices.size() - 1);
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    segs.push_back(make_segment(vertices[k], vertices[k + 1]));
  }
  return PiecewiseCausalCurve(std::move(segs));
}

SpacetimePoint PiecewiseCausalCurve::start() const {
  if (segments_.empty()) throw PreconditionError("empty curve");
  return segments_.front().start();
}

SpacetimePoint PiecewiseCausalCurve::end() const {
  if (segments_.empty()) throw PreconditionError("empty curve");
  return segments_.back().end();
}

void PiecewiseCausalCurve::set_exact_times(std::vector<Rational> times) {
  if (times.size() != segments_.size() + 1) {
    throw PreconditionError("exact vertex times must have one entry per vertex");
  }
  exact_times_ = std::move(times);
}

std::vector<CurveDefect> PiecewiseCausalCurve::defects(const WarpedSpacetime& st) const {
  std::vector<CurveDefect> out;
  if (segments_.empty()) {
    out.push_back({0, "curve has no segments"});
    return out;
  }
  const BaseManifold& base = st.base();
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const CausalSegment& s = segments_[k];
    if (!st.contains(s.start()) || !st.contains(s.end())) {
      out.push_back({k, "segment leaves the spacetime"});
      continue;
    }
    if (k > 0) {
      const CausalSegment& prev = segments_[k - 1];
      const double dt = std::abs(prev.t_end - s.t_start);
      const double dx = st.contains(prev.end()) ? base.distance(prev.base_end, s.base_start) : 0.0;
      if (dt > kGapTolerance * std::max(1.0, std::abs(s.t_start)) || dx > kGapTolerance) {
        out.push_back({k, "discontinuous: gap of " + std::to_string(std::max(dt, dx)) +
                              " before this segment"});
      }
    }
    if ((s.direction == Direction::Future && s.t_end < s.t_start) ||
        (s.direction == Direction::Past && s.t_end > s.t_start)) {
      out.push_back({k, "time runs against the declared direction"});
    }
    const double reach = st.causal_reach(s.t_start, s.t_end);
    const double ds = base.distance(s.base_start, s.base_end);
    if (ds > reach + kCausalSlack * std::max(1.0, reach)) {
      out.push_back({k, "spacelike: base distance " + std::to_string(ds) +
                            " exceeds causal reach " + std::to_string(reach)});
    }
  }
  return out;
}

std::optional<CurveDefect> PiecewiseCausalCurve::find_defect(const WarpedSpacetime& st) const {
  auto all = defects(st);
  if (all.empty()) return std::nullopt;
  return all.front();
}

void PiecewiseCausalCurve::validate(const WarpedSpacetime& st) const {
  if (auto d = find_defect(st)) {
    throw PreconditionError("segment " + std::to_string(d->segment) + ": " + d->reason);
  }
}

double null_length(const PiecewiseCausalCurve& curve, const TimeFunction& tf) {
  if (curve.exact_times() && tf.affine_slope()) {
    const auto& times = *curve.exact_times();
    Rational total(0);
    for (std::size_t k = 0; k + 1 < times.size(); ++k) total = total + (times[k + 1] - times[k]).abs();
    return *tf.affine_slope() * total.to_double();
  }
  CompensatedSum sum;
  for (const CausalSegment& s : curve.segments()) sum.add(std::abs(tf.increment(s.t_start, s.t_end)));
  return sum.value();
}

PiecewiseCausalCurve generate_zigzag(const WarpedSpacetime& st, const SpacetimePoint& p,
                                     const SpacetimePoint& q, int n_teeth, double band_lo,
                                     double band_hi) {
  st.require(p);
  st.require(q);
  if (n_teeth < 1) throw PreconditionError("zig-zag needs at least one tooth");
  if (!(band_lo <= band_hi) || band_lo < st.t0() || band_hi > st.t1()) {
    throw PreconditionError("zig-zag band must be an ordered sub-interval of the time interval");
  }
  if (p.t < band_lo || q.t < band_lo) {
    throw PreconditionError("zig-zag endpoints must lie at or above the band floor");
  }
  const BaseManifold& base = st.base();
  const double d = base.distance(p.x, q.x);
  const double rp = st.causal_reach(band_lo, p.t);
  const double rq = st.causal_reach(band_lo, q.t);
  const double rest = d - rp - rq;
  if (rest < 0.0) {
    throw PreconditionError("endpoints are too close for a zig-zag through the band floor");
  }
  const double tooth = rest / (2.0 * n_teeth);
  const auto peak = st.time_after_reach(band_lo, tooth);
  if (!peak || *peak > band_hi * (1.0 + 1e-12) + 1e-15) {
    throw PreconditionError("band is too narrow for " + std::to_string(n_teeth) + " teeth");
  }
  auto at = [&](double covered, double t) {
    const double s = d > 0.0 ? std::clamp(covered / d, 0.0, 1.0) : 0.0;
    return SpacetimePoint{t, base.interpolate(p.x, q.x, s)};
  };
  std::vector<SpacetimePoint> verts{p};
  double covered = rp;
  if (rp > 0.0) verts.push_back(at(covered, band_lo));
  if (rest > 0.0) {
    for (int k = 0; k < n_teeth; ++k) {
      covered += tooth;
      verts.push_back(at(covered, *peak));
      covered += tooth;
      verts.push_back(at(covered, band_lo));
    }
  }
  if (rq > 0.0 || verts.size() == 1) {
    verts.push_back(q);
  } else {
    verts.back() = q;
  }
  return PiecewiseCausalCurve::through(verts);
}

std::vector<std::string> fractal_family_names() {
  return {"timelike_2", "null_5", "sqrt_nonattained", "removed_point", "removed_line"};
}

double fractal_expected_length(const std::string& name, int i) {
  if (name == "timelike_2") return 2.0;
  if (name == "null_5") return 5.0;
  if (name == "sqrt_nonattained") {
    // 2^{(i+1)/2} (2^{(i-1)/2} - sqrt(2^{i-1} - 1)), rationalized.
    const double h = std::ldexp(1.0, i - 1);
    return std::sqrt(4.0 * h) / (std::sqrt(h) + std::sqrt(h - 1.0));
  }
  if (name == "removed_point" || name == "removed_line") return 2.0 + std::ldexp(1.0, 1 - i);
  throw DomainError("unknown curve family '" + name + "'");
}

FractalInstance fractal_family(const std::string& name, int i) {
  if (i < 1 || i > kMaxFractalIndex) {
    throw DomainError("family index must be in [1, " + std::to_string(kMaxFractalIndex) + "]");
  }
  const auto names = fractal_family_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw DomainError("unknown curve family '" + name + "'");
  }
  if (predicted_segments(name, i) > kMaxFractalSegments) {
    throw DomainError("family " + name + " at index " + std::to_string(i) +
                      " exceeds the segment budget of " + std::to_string(kMaxFractalSegments));
  }
  const double expected = fractal_expected_length(name, i);
  if (name == "timelike_2") {
    return {name, i, WarpedSpacetime::product(0.0, 2.0, BaseManifold::interval(4.0)),
            TimeFunction::canonical(), curve_from(timelike2_points(i)), {}, expected, 1.0};
  }
  if (name == "null_5") {
    return {name, i, WarpedSpacetime::product(0.0, 2.0, BaseManifold::interval(4.0)),
            TimeFunction::canonical(), curve_from(null5_points(i)), {}, expected, 1.0};
  }
  if (name == "sqrt_nonattained") {
    return {name, i, WarpedSpacetime::product(0.0, 2.0, BaseManifold::interval(4.0)),
            TimeFunction::sqrt_jump(), curve_from(sqrt_points(i)), {}, expected, 1.0};
  }
  if (name == "removed_point") {
    return {name, i, WarpedSpacetime::product(0.0, 3.0, BaseManifold::interval(6.0)),
            TimeFunction::canonical(), curve_from(removed_point_points(i)),
            {Excision::point(1.0, 1.0)}, expected, 2.0};
  }
  return {name, i, WarpedSpacetime::product(0.0, 2.0, BaseManifold::interval(4.0)),
          TimeFunction::canonical(), curve_from(removed_line_points(i)),
          {Excision::segment(1.0, -1.0, 1.0)}, expected, 2.0};
}

}  // namespace nulldist

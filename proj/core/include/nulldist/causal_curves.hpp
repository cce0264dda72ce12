#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nulldist/rational.hpp"
#include "nulldist/spacetime.hpp"

namespace nulldist {

enum class Direction { Future, Past };

struct CausalSegment {
  Direction direction = Direction::Future;
  double t_start = 0.0;
  double t_end = 0.0;
  BasePoint base_start;
  BasePoint base_end;

  SpacetimePoint start() const { return {t_start, base_start}; }
  SpacetimePoint end() const { return {t_end, base_end}; }
};

/// Builds the segment between two points, picking the direction from the time order.
CausalSegment make_segment(const SpacetimePoint& a, const SpacetimePoint& b);

struct CurveDefect {
  std::size_t segment = 0;
  std::string reason;
};

class PiecewiseCausalCurve {
 public:
  PiecewiseCausalCurve() = default;
  explicit PiecewiseCausalCurve(std::vector<CausalSegment> segments)
      : segments_(std::move(segments)) {}

  /// Polyline through the given vertices.
  static PiecewiseCausalCurve through(const std::vector<SpacetimePoint>& vertices);

  const std::vector<CausalSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  SpacetimePoint start() const;
  SpacetimePoint end() const;

  /// Exact vertex times (size() + 1 entries) when the curve came from a rational recursion.
  const std::optional<std::vector<Rational>>& exact_times() const { return exact_times_; }
  void set_exact_times(std::vector<Rational> times);

  /// Every defect: gaps between segments, wrong directions, spacelike pieces.
  /// Empty for an admissible curve.
  std::vector<CurveDefect> defects(const WarpedSpacetime& st) const;
  std::optional<CurveDefect> find_defect(const WarpedSpacetime& st) const;
  /// Throws PreconditionError describing the first defect.
  void validate(const WarpedSpacetime& st) const;

 private:
  std::vector<CausalSegment> segments_;
  std::optional<std::vector<Rational>> exact_times_;
};

/// Sum of |tau(end) - tau(start)| over segments (compensated summation).
/// Affine time functions on curves with exact vertex times are summed exactly.
double null_length(const PiecewiseCausalCurve& curve, const TimeFunction& tf);

/// Zig-zag from p to q whose teeth stay in the time band [band_lo, band_hi]:
/// a past null leg from p down to band_lo, n_teeth null up/down teeth, a future null leg up to q.
PiecewiseCausalCurve generate_zigzag(const WarpedSpacetime& st, const SpacetimePoint& p,
                                     const SpacetimePoint& q, int n_teeth, double band_lo,
                                     double band_hi);

/// Curve family with a closed-form null length.
struct FractalInstance {
  std::string family;
  int index = 1;
  WarpedSpacetime spacetime;
  TimeFunction tau;
  PiecewiseCausalCurve curve;
  std::vector<Excision> excisions;
  double expected_length = 0.0;  // closed form at this index
  double limit_length = 0.0;     // null length of the limiting curve (or its infimum)
};

constexpr int kMaxFractalIndex = 30;
constexpr std::size_t kMaxFractalSegments = std::size_t{1} << 22;

/// Families: timelike_2, null_5, sqrt_nonattained, removed_point, removed_line.
FractalInstance fractal_family(const std::string& name, int i);
std::vector<std::string> fractal_family_names();
/// Closed-form null length of member i.
double fractal_expected_length(const std::string& name, int i);

}  // namespace nulldist

#include "nulldist/null_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nulldist/errors.hpp"

namespace nulldist {

std::string to_string(Method m) {
  switch (m) {
    case Method::Lattice:
      return "lattice";
    case Method::ClosedForm:
      return "closed";
    case Method::Profile:
      return "profile";
  }
  return "lattice";
}

Method method_from_string(const std::string& s) {
  if (s == "lattice") return Method::Lattice;
  if (s == "closed" || s == "closed_form") return Method::ClosedForm;
  if (s == "profile") return Method::Profile;
  throw ParseError("unknown method '" + s + "' (expected lattice, closed or profile)");
}

std::optional<double> closed_form_distance(const WarpedSpacetime& st, const TimeFunction& tf,
                                           const SpacetimePoint& p, const SpacetimePoint& q) {
  st.require(p);
  st.require(q);
  if (st.is_causally_related(p, q)) return std::abs(tf.increment(p.t, q.t));
  if (st.is_product() && tf.canonical_kind()) {
    return std::max(std::abs(q.t - p.t), st.base().distance(p.x, q.x));
  }
  return std::nullopt;
}

Bounds warped_bounds(const WarpedSpacetime& st, const SpacetimePoint& p, const SpacetimePoint& q) {
  st.require(p);
  st.require(q);
  const double dt = std::abs(q.t - p.t);
  if (st.is_causally_related(p, q)) return {dt, dt};
  const double ds = st.base().distance(p.x, q.x);
  const double dprod = std::max(dt, ds);
  const double lo = std::max({dt, st.f_min() * ds, std::min(1.0, st.f_min()) * dprod});
  const double hi = std::min(st.f_max() * ds, std::max(1.0, st.f_max()) * dprod);
  return {lo, std::max(lo, hi)};
}

DistanceResult lattice_distance(const CausalLattice& lattice, const SpacetimePoint& p,
                                const SpacetimePoint& q) {
  const Snap a = lattice.snap(p);
  const Snap b = lattice.snap(q);
  DistanceResult r;
  r.method = Method::Lattice;
  r.value = lattice.node_distance(a.node, b.node);
  r.resolution = lattice.pair_tolerance(a.node, b.node);
  r.nodes = lattice.node_count();
  r.snap_dt = std::max(a.dt, b.dt);
  r.snap_dx = std::max(a.dx, b.dx);
  const WarpedSpacetime& st = lattice.spacetime();
  const TimeFunction& tf = lattice.time_function();
  const SpacetimePoint pa = lattice.node_point(a.node);
  const SpacetimePoint pb = lattice.node_point(b.node);
  double lo = std::abs(tf.increment(pa.t, pb.t));
  if (tf.canonical_kind() && lattice.config().excisions.empty()) {
    lo = std::max(lo, warped_bounds(st, pa, pb).lo);
  }
  r.lower_bound = std::min(lo, r.value);
  double slack = 0.0;
  if (!a.exact() || !b.exact()) {
    const double per_point = std::max(lattice.max_time_step(), st.f_max() * lattice.space_step());
    slack = (a.exact() ? 0.0 : per_point) + (b.exact() ? 0.0 : per_point);
    r.note = "query points snapped to lattice nodes";
  }
  r.upper_bound = r.value + slack;
  return r;
}

DistanceResult profile_null_distance(const WarpedSpacetime& st, const SpacetimePoint& p,
                                     const SpacetimePoint& q, int n_levels) {
  st.require(p);
  st.require(q);
  if (n_levels < 2) throw PreconditionError("profile solver needs at least two levels");
  const BaseManifold& base = st.base();
  const double d = base.distance(p.x, q.x);
  DistanceResult r;
  r.method = Method::Profile;
  const Bounds b = warped_bounds(st, p, q);
  if (st.is_causally_related(p, q)) {
    throw PreconditionError("profile solver called on a causal pair; the distance is |dt|");
  }
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(n_levels) + 2);
  for (int i = 0; i < n_levels; ++i) {
    levels.push_back(st.t0() + st.duration() * i / (n_levels - 1));
  }
  levels.push_back(p.t);
  levels.push_back(q.t);
  for (double bp : st.warping().breakpoints) {
    if (bp > st.t0() && bp < st.t1()) levels.push_back(bp);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t n = levels.size();
  const auto ip = static_cast<std::size_t>(
      std::lower_bound(levels.begin(), levels.end(), p.t) - levels.begin());
  const auto iq = static_cast<std::size_t>(
      std::lower_bound(levels.begin(), levels.end(), q.t) - levels.begin());

  std::vector<double> fl(n);
  std::vector<double> fband(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) fl[i] = st.warping()(levels[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mid = st.warping()(0.5 * (levels[i] + levels[i + 1]));
    fband[i] = std::max({fl[i], fl[i + 1], mid});
  }
  const int columns = std::max(1, n_levels);
  const double du = d / columns;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cur(n, kInf);
  std::vector<double> next(n, kInf);
  auto vertical = [&](std::vector<double>& v) {
    for (std::size_t i = 1; i < n; ++i) v[i] = std::min(v[i], v[i - 1] + (levels[i] - levels[i - 1]));
    for (std::size_t i = n - 1; i-- > 0;) v[i] = std::min(v[i], v[i + 1] + (levels[i + 1] - levels[i]));
  };
  cur[ip] = 0.0;
  vertical(cur);
  for (int c = 0; c < columns; ++c) {
    std::fill(next.begin(), next.end(), kInf);
    for (std::size_t i = 0; i < n; ++i) {
      if (cur[i] == kInf) continue;
      next[i] = std::min(next[i], cur[i] + du * fl[i]);
      if (i + 1 < n) {
        const double step = std::max(du * fband[i], levels[i + 1] - levels[i]);
        next[i + 1] = std::min(next[i + 1], cur[i] + step);
      }
      if (i > 0) {
        const double step = std::max(du * fband[i - 1], levels[i] - levels[i - 1]);
        next[i - 1] = std::min(next[i - 1], cur[i] + step);
      }
    }
    vertical(next);
    std::swap(cur, next);
  }
  r.value = cur[iq];
  r.lower_bound = std::min(b.lo, r.value);
  r.upper_bound = r.value;
  r.resolution = std::max(du, st.duration() / (n_levels - 1));
  r.nodes = n * static_cast<std::size_t>(columns + 1);
  return r;
}

DistanceResult null_distance(const WarpedSpacetime& st, const TimeFunction& tf,
                             const SpacetimePoint& p, const SpacetimePoint& q, Method method,
                             const LatticeConfig& config) {
  switch (method) {
    case Method::ClosedForm: {
      const auto v = closed_form_distance(st, tf, p, q);
      if (!v) {
        throw PreconditionError("no closed form for a non-causal pair in " + st.describe() +
                                " with time function " + tf.label());
      }
      DistanceResult r;
      r.method = Method::ClosedForm;
      r.value = r.lower_bound = r.upper_bound = *v;
      return r;
    }
    case Method::Profile:
      if (!tf.canonical_kind()) {
        throw PreconditionError("the profile solver handles the canonical time function only");
      }
    {
      if (st.is_causally_related(p, q)) {
        DistanceResult r;
        r.method = Method::Profile;
        r.value = r.lower_bound = r.upper_bound = std::abs(q.t - p.t);
        r.note = "causal pair";
        return r;
      }
      DistanceResult r = profile_null_distance(st, p, q, config.n_time);
      LatticeConfig cfg = config;
      cfg.extra_levels.push_back(p.t);
      cfg.extra_levels.push_back(q.t);
      const DistanceResult lat = lattice_distance(CausalLattice(st, tf, cfg), p, q);
      const double gap = std::abs(r.value - lat.value);
      if (gap > r.resolution + lat.resolution + (lat.upper_bound - lat.value)) {
        r.note = "profile disagrees with lattice (" + std::to_string(lat.value) +
                 "); fast path only";
      } else {
        r.note = "cross-checked against lattice (" + std::to_string(lat.value) + ")";
      }
      return r;
    }
    case Method::Lattice: {
      LatticeConfig cfg = config;
      cfg.extra_levels.push_back(p.t);
      cfg.extra_levels.push_back(q.t);
      const CausalLattice lattice(st, tf, cfg);
      return lattice_distance(lattice, p, q);
    }
  }
  throw PreconditionError("unknown method");
}

}  // namespace nulldist

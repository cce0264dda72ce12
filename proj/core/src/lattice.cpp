#include "nulldist/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAdmissibleSlack = 1e-10;
constexpr double kSameLevel = 1e-12;

double point_segment_distance(double pt, double px, double at, double ax, double bt, double bx) {
  const double vt = bt - at;
  const double vx = bx - ax;
  const double len2 = vt * vt + vx * vx;
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(((pt - at) * vt + (px - ax) * vx) / len2, 0.0, 1.0);
  return std::hypot(pt - (at + s * vt), px - (ax + s * vx));
}

double orient(double at, double ax, double bt, double bx, double ct, double cx) {
  return (bt - at) * (cx - ax) - (bx - ax) * (ct - at);
}

// Euclidean distance in the (t, x) chart between two closed segments.
double segment_distance(double at, double ax, double bt, double bx, double ct, double cx, double dt,
                        double dx) {
  const double o1 = orient(at, ax, bt, bx, ct, cx);
  const double o2 = orient(at, ax, bt, bx, dt, dx);
  const double o3 = orient(ct, cx, dt, dx, at, ax);
  const double o4 = orient(ct, cx, dt, dx, bt, bx);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return 0.0;
  }
  return std::min({point_segment_distance(at, ax, ct, cx, dt, dx),
                   point_segment_distance(bt, bx, ct, cx, dt, dx),
                   point_segment_distance(ct, cx, at, ax, bt, bx),
                   point_segment_distance(dt, dx, at, ax, bt, bx)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

CausalLattice::CausalLattice(const WarpedSpacetime& st, const TimeFunction& tf, LatticeConfig config)
    : st_(st), tf_(tf), config_(std::move(config)) {
  const BaseManifold& base = st_.base();
  if (base.dimension() != 1) {
    throw PreconditionError("the causal lattice needs a one-dimensional base");
  }
  if (config_.n_time < 2 || config_.n_space < 2 || config_.stencil < 1) {
    throw PreconditionError("lattice needs n_time >= 2, n_space >= 2 and stencil >= 1");
  }
  periodic_ = base.kind() == BaseKind::Circle;
  if (periodic_ && config_.n_space < 3) throw PreconditionError("circle lattice needs n_space >= 3");
  if (!config_.excisions.empty() && periodic_) {
    throw PreconditionError("excisions are supported on interval bases only");
  }
  n_space_ = config_.n_space;
  if (periodic_) {
    ds_ = base.size() / n_space_;
    x0_ = 0.0;
  } else {
    ds_ = base.size() / (n_space_ - 1);
    x0_ = -0.5 * base.size();
  }
  build_levels();
  build_edges();
  apply_excisions();
  compute_tolerance();
}

long CausalLattice::wrap_space(long j) const {
  const long n = n_space_;
  if (periodic_) return ((j % n) + n) % n;
  return (j < 0 || j >= n) ? -1 : j;
}

double CausalLattice::node_x(std::size_t j) const { return x0_ + static_cast<double>(j) * ds_; }

SpacetimePoint CausalLattice::node_point(std::uint32_t node) const {
  const std::size_t level = node / space_count();
  const std::size_t j = node % space_count();
  double x = node_x(j);
  if (!periodic_) x = std::min(x, 0.5 * st_.base().size());
  return SpacetimePoint::on_line(times_[level], x);
}

void CausalLattice::build_levels() {
  const double t0 = st_.t0();
  const double t1 = st_.t1();
  const double total = st_.causal_reach(t0, t1);
  const double deta_req = total / (config_.n_time - 1);
  m_ = std::max(1, static_cast<int>(std::lround(ds_ / deta_req)));
  deta_ = ds_ / m_;

  times_ = {t0};
  eta_ = {0.0};
  double t = t0;
  double eta = 0.0;
  for (long k = 1;; ++k) {
    const double target = static_cast<double>(k) * deta_;
    if (target >= total * (1.0 - 1e-12)) break;
    // Local Newton on reach(t, next) = target - eta, safeguarded by bisection.
    const double need = target - eta;
    double lo = t;
    double hi = t1;
    double next = std::min(t1, t + need / st_.null_speed(t));
    double got = st_.causal_reach(t, next);
    for (int it = 0; it < 100; ++it) {
      const double residual = need - got;
      if (std::abs(residual) <= 1e-14 * std::max(need, 1e-300) + 1e-300) break;
      if (residual > 0.0) {
        lo = next;
      } else {
        hi = next;
      }
      double cand = next + residual / st_.null_speed(next);
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
      if (cand == next) break;
      next = cand;
      got = st_.causal_reach(t, next);
      if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(next))) break;
    }
    t = next;
    eta = target;
    times_.push_back(t);
    eta_.push_back(eta);
  }
  if (t1 - times_.back() <= kSameLevel * std::max(1.0, std::abs(t1))) {
    times_.back() = t1;
  } else {
    times_.push_back(t1);
    eta_.push_back(eta + st_.causal_reach(t, t1));
  }

  std::vector<double> extra = config_.extra_levels;
  for (double j : tf_.jumps()) extra.push_back(j);
  std::sort(extra.begin(), extra.end());
  for (double x : extra) {
    if (!(x >= t0 && x <= t1)) continue;
    auto it = std::lower_bound(times_.begin(), times_.end(), x);
    const std::size_t idx = static_cast<std::size_t>(it - times_.begin());
    const double scale = kSameLevel * std::max(1.0, std::abs(x));
    if (idx < times_.size() && std::abs(times_[idx] - x) <= scale) {
      times_[idx] = x;
      continue;
    }
    if (idx > 0 && std::abs(times_[idx - 1] - x) <= scale) {
      times_[idx - 1] = x;
      continue;
    }
    const double e = eta_[idx - 1] + st_.causal_reach(times_[idx - 1], x);
    times_.insert(times_.begin() + static_cast<long>(idx), x);
    eta_.insert(eta_.begin() + static_cast<long>(idx), e);
  }

  tau_.resize(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) tau_[i] = tf_(times_[i]);
  max_dt_ = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) max_dt_ = std::max(max_dt_, times_[i] - times_[i - 1]);
  if (times_.size() * space_count() > std::numeric_limits<std::uint32_t>::max() / 2) {
    throw PreconditionError("lattice too large");
  }
}

void CausalLattice::build_edges() {
  const std::size_t n = times_.size();
  const int r = config_.stencil;
  up_.assign(n * static_cast<std::size_t>(r), -1);
  rev_lo_.assign(n * static_cast<std::size_t>(r), std::numeric_limits<std::int32_t>::max());
  rev_hi_.assign(n * static_cast<std::size_t>(r), -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 1; k <= r; ++k) {
      const double need = k * ds_;
      const double target = eta_[i] + need - kAdmissibleSlack * need;
      auto it = std::lower_bound(eta_.begin() + static_cast<long>(i) + 1, eta_.end(), target);
      if (it == eta_.end()) continue;
      const auto l = static_cast<std::int32_t>(it - eta_.begin());
      const std::size_t slot = i * static_cast<std::size_t>(r) + static_cast<std::size_t>(k - 1);
      up_[slot] = l;
      const std::size_t rslot = static_cast<std::size_t>(l) * static_cast<std::size_t>(r) +
                                static_cast<std::size_t>(k - 1);
      rev_lo_[rslot] = std::min(rev_lo_[rslot], static_cast<std::int32_t>(i));
      rev_hi_[rslot] = std::max(rev_hi_[rslot], static_cast<std::int32_t>(i));
    }
  }
}

void CausalLattice::apply_excisions() {
  if (config_.excisions.empty()) return;
  hole_radius_ = config_.excision_radius_cells * std::max(max_dt_, ds_);
  removed_.assign(node_count(), 0);
  for (std::size_t i = 0; i < times_.size(); ++i) {
    for (std::size_t j = 0; j < space_count(); ++j) {
      const double t = times_[i];
      const double x = node_x(j);
      for (const Excision& e : config_.excisions) {
        const double gap = std::max({0.0, e.x_lo - x, x - e.x_hi});
        if (std::hypot(t - e.t, gap) < hole_radius_) removed_[node_index(i, j)] = 1;
      }
    }
  }
}

bool CausalLattice::edge_blocked(std::size_t la, std::size_t ja, std::size_t lb,
                                 long jb_unwrapped) const {
  const double ta = times_[la];
  const double tb = times_[lb];
  const double xa = node_x(ja);
  const double xb = x0_ + static_cast<double>(jb_unwrapped) * ds_;
  for (const Excision& e : config_.excisions) {
    if (std::min(ta, tb) > e.t + hole_radius_ || std::max(ta, tb) < e.t - hole_radius_) continue;
    if (segment_distance(ta, xa, tb, xb, e.t, e.x_lo, e.t, e.x_hi) < hole_radius_) return true;
  }
  return false;
}

template <typename Visit>
void CausalLattice::for_each_edge(std::uint32_t node, Visit&& visit) const {
  const std::size_t ns = space_count();
  const std::size_t level = node / ns;
  const std::size_t j = node % ns;
  const double tau = tau_[level];
  const bool holes = !removed_.empty();
  auto offer = [&](std::size_t l, long jj_unwrapped) {
    const long jw = wrap_space(jj_unwrapped);
    if (jw < 0) return;
    const std::uint32_t other = node_index(l, static_cast<std::size_t>(jw));
    if (holes && (removed_[other] != 0 || edge_blocked(level, j, l, jj_unwrapped))) return;
    visit(other, std::abs(tau_[l] - tau));
  };
  if (level + 1 < times_.size()) offer(level + 1, static_cast<long>(j));
  if (level > 0) offer(level - 1, static_cast<long>(j));
  const int r = config_.stencil;
  for (int k = 1; k <= r; ++k) {
    const std::size_t slot = level * static_cast<std::size_t>(r) + static_cast<std::size_t>(k - 1);
    const std::int32_t u = up_[slot];
    const std::int32_t lo = rev_lo_[slot];
    const std::int32_t hi = rev_hi_[slot];
    for (int sign : {-1, 1}) {
      const long jj = static_cast<long>(j) + sign * k;
      if (u >= 0) offer(static_cast<std::size_t>(u), jj);
      for (std::int32_t l = lo; l <= hi; ++l) offer(static_cast<std::size_t>(l), jj);
    }
  }
}

void CausalLattice::compute_tolerance() {
  auto crosses_jump = [this](double a, double b) {
    for (double jmp : tf_.jumps()) {
      if (jmp >= std::min(a, b) && jmp <= std::max(a, b)) return true;
    }
    return false;
  };
  double worst = 0.0;
  const int r = config_.stencil;
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!crosses_jump(times_[i], times_[i + 1])) worst = std::max(worst, std::abs(tau_[i + 1] - tau_[i]));
    const std::int32_t u = up_[i * static_cast<std::size_t>(r)];
    if (u >= 0 && !crosses_jump(times_[i], times_[static_cast<std::size_t>(u)])) {
      worst = std::max(worst, std::abs(tau_[static_cast<std::size_t>(u)] - tau_[i]));
    }
  }
  tolerance_ = 2.0 * worst;

  const std::size_t n = times_.size();
  std::vector<std::uint8_t> aligned(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = eta_[i] / deta_;
    aligned[i] = std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k) ? 1 : 0;
  }
  slack_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (aligned[i] != 0) continue;
    double s = 0.0;
    for (std::size_t l = i; l-- > 0;) {
      if (aligned[l] == 0) continue;
      s = std::max(s, std::abs(tau_[i] - tau_[l]));
      break;
    }
    for (std::size_t l = i + 1; l < n; ++l) {
      if (aligned[l] == 0) continue;
      s = std::max(s, std::abs(tau_[l] - tau_[i]));
      break;
    }
    slack_[i] = s;
  }
}

Snap CausalLattice::snap(const SpacetimePoint& p) const {
  st_.require(p);
  auto it = std::lower_bound(times_.begin(), times_.end(), p.t);
  std::size_t level = static_cast<std::size_t>(it - times_.begin());
  if (level == times_.size()) level = times_.size() - 1;
  if (level > 0 && std::abs(times_[level - 1] - p.t) <= std::abs(times_[level] - p.t)) --level;
  const double x = p.x[0];
  long j = std::lround((x - x0_) / ds_);
  j = periodic_ ? wrap_space(j) : std::clamp(j, 0L, static_cast<long>(n_space_ - 1));
  const std::uint32_t node = node_index(level, static_cast<std::size_t>(j));
  Snap s{node, std::abs(times_[level] - p.t),
         st_.base().distance(p.x, node_point(node).x)};
  if (!removed_.empty()) {
    for (const Excision& e : config_.excisions) {
      const double gap = std::max({0.0, e.x_lo - x, x - e.x_hi});
      if (std::hypot(p.t - e.t, gap) < hole_radius_) {
        throw DomainError("point (" + fmt(p.t) + ", " + fmt(x) + ") lies inside an excision");
      }
    }
    if (removed_[node] != 0) {
      throw DomainError("point (" + fmt(p.t) + ", " + fmt(x) + ") snaps into an excision guard");
    }
  }
  return s;
}

std::vector<SpacetimePoint> CausalLattice::snap_points(
    const std::vector<SpacetimePoint>& points) const {
  std::vector<SpacetimePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(node_point(snap(p).node));
  return out;
}

std::vector<double> CausalLattice::distances_from(std::uint32_t source) const {
  std::vector<double> dist(node_count(), kInf);
  if (deleted(source)) throw DomainError("source node is excised");
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for_each_edge(u, [&](std::uint32_t v, double w) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    });
  }
  return dist;
}

double CausalLattice::node_distance(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return 0.0;
  std::vector<double> dist(node_count(), kInf);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[a] = 0.0;
  heap.emplace(0.0, a);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == b) return d;
    for_each_edge(u, [&](std::uint32_t v, double w) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    });
  }
  const SpacetimePoint pa = node_point(a);
  const SpacetimePoint pb = node_point(b);
  throw UnreachableError("no lattice path from (" + fmt(pa.t) + ", " + fmt(pa.x[0]) + ") to (" +
                         fmt(pb.t) + ", " + fmt(pb.x[0]) + ")");
}

std::vector<std::vector<double>> CausalLattice::distance_matrix(
    const std::vector<SpacetimePoint>& points) const {
  const std::size_t n = points.size();
  std::vector<Snap> snaps;
  snaps.reserve(n);
  for (const auto& p : points) snaps.push_back(snap(p));
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  const std::size_t ns = space_count();
  auto check = [&](double v, std::size_t a, std::size_t b) {
    if (!std::isfinite(v)) {
      throw UnreachableError("lattice is disconnected between sample points " + std::to_string(a) +
                             " and " + std::to_string(b));
    }
    return v;
  };
  if (periodic_ && removed_.empty()) {
    std::vector<std::vector<double>> fields(level_count());
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t la = snaps[a].node / ns;
      if (fields[la].empty()) fields[la] = distances_from(node_index(la, 0));
    }
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t la = snaps[a].node / ns;
      const std::size_t ja = snaps[a].node % ns;
      for (std::size_t b = a + 1; b < n; ++b) {
        const std::size_t lb = snaps[b].node / ns;
        const std::size_t jb = snaps[b].node % ns;
        const std::size_t rel = (jb + ns - ja) % ns;
        const double v = check(fields[la][node_index(lb, rel)], a, b);
        m[a][b] = v;
        m[b][a] = v;
      }
    }
    return m;
  }
  for (std::size_t a = 0; a + 1 < n; ++a) {
    const std::vector<double> field = distances_from(snaps[a].node);
    for (std::size_t b = a + 1; b < n; ++b) {
      const double v = check(field[snaps[b].node], a, b);
      m[a][b] = v;
      m[b][a] = v;
    }
  }
  return m;
}

std::vector<std::uint8_t> CausalLattice::future_set(std::uint32_t from) const {
  std::vector<std::uint8_t> seen(node_count(), 0);
  if (deleted(from)) return seen;
  std::vector<std::uint32_t> stack{from};
  seen[from] = 1;
  const std::size_t ns = space_count();
  const int r = config_.stencil;
  const bool holes = !removed_.empty();
  while (!stack.empty()) {
    const std::uint32_t u = stack.back();
    stack.pop_back();
    const std::size_t level = u / ns;
    const std::size_t j = u % ns;
    auto push = [&](std::size_t l, long jj_unwrapped) {
      const long jw = wrap_space(jj_unwrapped);
      if (jw < 0) return;
      const std::uint32_t v = node_index(l, static_cast<std::size_t>(jw));
      if (seen[v] != 0) return;
      if (holes && (removed_[v] != 0 || edge_blocked(level, j, l, jj_unwrapped))) return;
      seen[v] = 1;
      stack.push_back(v);
    };
    if (level + 1 < times_.size()) push(level + 1, static_cast<long>(j));
    for (int k = 1; k <= r; ++k) {
      const std::int32_t up = up_[level * static_cast<std::size_t>(r) + static_cast<std::size_t>(k - 1)];
      if (up < 0) continue;
      push(static_cast<std::size_t>(up), static_cast<long>(j) - k);
      push(static_cast<std::size_t>(up), static_cast<long>(j) + k);
    }
  }
  return seen;
}

bool CausalLattice::future_reachable(const SpacetimePoint& p, const SpacetimePoint& q) const {
  const Snap a = snap(p);
  const Snap b = snap(q);
  return future_set(a.node)[b.node] != 0;
}

}  // namespace nulldist

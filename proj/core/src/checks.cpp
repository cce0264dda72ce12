#include "nulldist/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

constexpr std::size_t kMaxExamples = 8;

bool related_on(const CausalLattice& lattice, const SpacetimePoint& p, const SpacetimePoint& q,
                std::map<std::uint32_t, std::vector<std::uint8_t>>& futures) {
  if (lattice.config().excisions.empty()) return lattice.spacetime().is_causally_related(p, q);
  const std::uint32_t a = lattice.snap(p).node;
  const std::uint32_t b = lattice.snap(q).node;
  auto reach = [&](std::uint32_t from, std::uint32_t to) {
    auto it = futures.find(from);
    if (it == futures.end()) it = futures.emplace(from, lattice.future_set(from)).first;
    return it->second[to] != 0;
  };
  return reach(a, b) || reach(b, a);
}

}  // namespace

CausalityReport encodes_causality_check(const CausalLattice& lattice,
                                        const std::vector<PointPair>& pairs, double tol) {
  CausalityReport rep;
  rep.tolerance = tol;
  rep.min_unrelated_gap = std::numeric_limits<double>::infinity();
  std::map<std::uint32_t, std::vector<double>> fields;
  std::map<std::uint32_t, std::vector<std::uint8_t>> futures;
  const TimeFunction& tf = lattice.time_function();
  for (const auto& [p, q] : pairs) {
    const std::uint32_t a = lattice.snap(p).node;
    const std::uint32_t b = lattice.snap(q).node;
    auto it = fields.find(a);
    if (it == fields.end()) it = fields.emplace(a, lattice.distances_from(a)).first;
    const double dhat = it->second[b];
    if (!std::isfinite(dhat)) throw UnreachableError("causality check hit a disconnected pair");
    const SpacetimePoint pa = lattice.node_point(a);
    const SpacetimePoint pb = lattice.node_point(b);
    const double dtau = std::abs(tf.increment(pa.t, pb.t));
    const bool rel = related_on(lattice, pa, pb, futures);
    const double err = std::abs(dhat - dtau);
    ++rep.pairs;
    if (rel) {
      ++rep.related;
      rep.max_related_error = std::max(rep.max_related_error, err);
    } else {
      rep.min_unrelated_gap = std::min(rep.min_unrelated_gap, dhat - dtau);
    }
    if (rel != (err <= tol)) {
      ++rep.violators;
      if (rep.examples.size() < kMaxExamples) rep.examples.push_back({pa, pb, dhat, dtau, rel});
    }
  }
  return rep;
}

std::vector<PointPair> sample_separated_pairs(const CausalLattice& lattice, std::size_t count,
                                              double margin, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(lattice.node_count() - 1));
  const WarpedSpacetime& st = lattice.spacetime();
  std::vector<PointPair> out;
  out.reserve(count);
  const std::size_t max_tries = 200 * count + 1000;
  for (std::size_t tries = 0; out.size() < count && tries < max_tries; ++tries) {
    const std::uint32_t a = pick(rng);
    const std::uint32_t b = pick(rng);
    if (a == b || lattice.deleted(a) || lattice.deleted(b)) continue;
    const SpacetimePoint p = lattice.node_point(a);
    const SpacetimePoint q = lattice.node_point(b);
    if (std::abs(st.cone_excess(p, q)) <= margin) continue;
    out.emplace_back(p, q);
  }
  if (out.size() < count) {
    throw NumericError("could not find enough pairs separated from the light cone by " +
                       std::to_string(margin));
  }
  return out;
}

ComparisonReport conformal_invariance_check(const WarpedSpacetime& st, const TimeFunction& tf,
                                            const ConformalFactor& psi,
                                            const std::vector<SpacetimePoint>& points,
                                            const LatticeConfig& config, double tol) {
  const CausalLattice a(st, tf, config);
  const CausalLattice b(st.rescaled(psi), tf, config);
  const Matrix ma = a.distance_matrix(points);
  const Matrix mb = b.distance_matrix(points);
  ComparisonReport rep;
  rep.tolerance = tol;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    for (std::size_t j = 0; j < ma.size(); ++j) {
      rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(ma[i][j] - mb[i][j]));
      rep.bitwise_equal = rep.bitwise_equal && ma[i][j] == mb[i][j];
    }
  }
  rep.passed = rep.max_abs_diff <= tol;
  return rep;
}

ComparisonReport cone_monotonicity_check(const WarpedSpacetime& narrow,
                                         const WarpedSpacetime& wide, const TimeFunction& tf,
                                         const std::vector<SpacetimePoint>& points,
                                         const LatticeConfig& config) {
  constexpr int kAudit = 2000;
  for (int i = 0; i <= kAudit; ++i) {
    const double t = narrow.t0() + narrow.duration() * i / kAudit;
    if (narrow.warping()(t) > wide.warping()(t) + 1e-12) {
      throw PreconditionError("cone monotonicity needs f_narrow <= f_wide on the interval");
    }
  }
  const CausalLattice a(narrow, tf, config);
  const CausalLattice b(wide, tf, config);
  const Matrix ma = a.distance_matrix(points);
  const Matrix mb = b.distance_matrix(points);
  ComparisonReport rep;
  rep.tolerance = a.tolerance() + b.tolerance();
  double worst = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    for (std::size_t j = 0; j < ma.size(); ++j) {
      worst = std::max(worst, ma[i][j] - mb[i][j]);
      rep.bitwise_equal = rep.bitwise_equal && ma[i][j] == mb[i][j];
    }
  }
  rep.max_abs_diff = worst;
  rep.passed = worst <= rep.tolerance;
  return rep;
}

double background_distance(const WarpedSpacetime& st, const SpacetimePoint& p,
                           const SpacetimePoint& q) {
  return std::hypot(q.t - p.t, st.base().distance(p.x, q.x));
}

AntiLipschitzEstimate anti_lipschitz_modulus(const WarpedSpacetime& st, const TimeFunction& tf,
                                             const std::vector<SpacetimePoint>& samples) {
  AntiLipschitzEstimate est;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i == j) continue;
      const SpacetimePoint& p = samples[i];
      const SpacetimePoint& q = samples[j];
      if (!st.causally_precedes(p, q)) continue;
      const double bg = background_distance(st, p, q);
      if (bg == 0.0) continue;
      ++est.causal_pairs;
      best = std::min(best, tf.increment(p.t, q.t) / bg);
    }
  }
  if (est.conclusive()) est.modulus = std::max(0.0, best);
  return est;
}

CompletenessCertificate completeness_certificate(const WarpedSpacetime& st, const TimeFunction& tf,
                                                 const std::vector<SpacetimePoint>& samples,
                                                 const Matrix& dhat) {
  if (dhat.size() != samples.size()) throw PreconditionError("matrix does not match samples");
  CompletenessCertificate c;
  c.worst_ratio = std::numeric_limits<double>::infinity();
  bool distinct = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double bg = background_distance(st, samples[i], samples[j]);
      if (bg == 0.0) continue;
      distinct = true;
      c.worst_ratio = std::min(c.worst_ratio, dhat[i][j] / bg);
    }
  }
  if (!distinct) {
    c.trivial = true;
    c.holds = true;
    return c;
  }
  const AntiLipschitzEstimate est = anti_lipschitz_modulus(st, tf, samples);
  c.modulus = est.modulus;
  c.holds = est.conclusive() && c.modulus > 0.0 && c.worst_ratio >= c.modulus * (1.0 - 1e-12);
  return c;
}

}  // namespace nulldist

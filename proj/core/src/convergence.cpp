#include "nulldist/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cmath>
#include <map>

#include "nulldist/errors.hpp"
#include "nulldist/null_distance.hpp"

namespace nulldist {

namespace {

double product_distance(const WarpedSpacetime& st, const SpacetimePoint& p,
                        const SpacetimePoint& q) {
  return std::max(std::abs(q.t - p.t), st.base().distance(p.x, q.x));
}

void require_js(const std::vector<int>& js) {
  if (js.empty()) throw PreconditionError("j list is empty");
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (js[i] < 1) throw PreconditionError("sequence indices must be >= 1");
    if (i > 0 && js[i] <= js[i - 1]) throw PreconditionError("j list must be increasing");
  }
}

}  // namespace

WarpingSequence WarpingSequence::uniform_sine(std::vector<int> js) {
  require_js(js);
  return {FamilyKind::UniformSine, 0.0, std::move(js)};
}

WarpingSequence WarpingSequence::example51(double h0, std::vector<int> js) {
  if (!(h0 > 0.0 && h0 < 1.0)) throw PreconditionError("example51 needs h0 in (0,1)");
  require_js(js);
  return {FamilyKind::Example51, h0, std::move(js)};
}

WarpingSequence WarpingSequence::example52(double h0, std::vector<int> js) {
  if (!(h0 > 1.0)) throw PreconditionError("example52 needs h0 > 1");
  require_js(js);
  return {FamilyKind::Example52, h0, std::move(js)};
}

WarpingSequence WarpingSequence::example53(std::vector<int> js) {
  require_js(js);
  return {FamilyKind::Example53, 0.0, std::move(js)};
}

WarpingSequence WarpingSequence::by_name(const std::string& name, double h0, std::vector<int> js) {
  if (name == "uniform_sine") return uniform_sine(std::move(js));
  if (name == "example51") return example51(h0, std::move(js));
  if (name == "example52") return example52(h0, std::move(js));
  if (name == "example53") return example53(std::move(js));
  throw ParseError("unknown family '" + name + "'");
}

std::vector<std::string> family_names() {
  return {"uniform_sine", "example51", "example52", "example53"};
}

std::string WarpingSequence::name() const {
  switch (kind) {
    case FamilyKind::UniformSine:
      return "uniform_sine";
    case FamilyKind::Example51:
      return "example51";
    case FamilyKind::Example52:
      return "example52";
    case FamilyKind::Example53:
      return "example53";
  }
  return "";
}

WarpingFunction WarpingSequence::member(int j) const {
  switch (kind) {
    case FamilyKind::UniformSine:
      return WarpingFunction::uniform_sine(j);
    case FamilyKind::Example51:
    case FamilyKind::Example52:
      return WarpingFunction::band(h0, j);
    case FamilyKind::Example53:
      return WarpingFunction::collapse(j);
  }
  throw PreconditionError("unknown family");
}

double WarpingSequence::lambda(int j) const {
  const WarpingFunction f = member(j);
  return std::max({1.0, f.f_max, 1.0 / f.f_min});
}

std::string LimitMetric::name() const {
  switch (kind) {
    case LimitKind::NullDistanceOfLimit:
      return "null_distance(" + f_inf.label + ")";
    case LimitKind::D0Formula:
      return "d0";
    case LimitKind::DInfinity53:
      return "dinfty53";
  }
  return "";
}

double evaluate_limit_d0(double h0, const WarpedSpacetime& st, const SpacetimePoint& p,
                         const SpacetimePoint& q) {
  st.require(p);
  st.require(q);
  const double ds = st.base().distance(p.x, q.x);
  const double tt = p.t + q.t;
  const double through = tt + h0 * std::max(0.0, ds - tt);
  return std::min(product_distance(st, p, q), through);
}

double evaluate_limit_dinfty_53(const WarpedSpacetime& st, const SpacetimePoint& p,
                                const SpacetimePoint& q) {
  st.require(p);
  st.require(q);
  if (p.t > 1.0 && q.t > 1.0) {
    return std::min(product_distance(st, p, q), (p.t - 1.0) + (q.t - 1.0));
  }
  return std::abs(p.t - q.t);
}

Envelope pointwise_envelope(double eps, double f_min, double d_inf) {
  if (!(f_min > 0.0)) throw PreconditionError("f_min must be positive");
  if (!(eps > 0.0 && eps < 0.25 * f_min)) {
    throw DomainError("envelope needs 0 < eps < f_min/4");
  }
  return {d_inf - eps * (1.0 + 3.0 * d_inf / f_min),
          d_inf + eps * (1.0 + 8.0 * eps / f_min + 8.0 * d_inf / f_min)};
}

std::vector<SpacetimePoint> SampleSpec::build(const WarpedSpacetime& st) const {
  std::vector<double> ts = times;
  if (ts.empty()) {
    if (n_time < 2) throw PreconditionError("sample grid needs n_time >= 2");
    for (int i = 0; i < n_time; ++i) ts.push_back(st.t0() + st.duration() * i / (n_time - 1));
  }
  if (n_space < 1) throw PreconditionError("sample grid needs n_space >= 1");
  const BaseManifold& base = st.base();
  if (base.dimension() != 1) throw PreconditionError("sample grids need a one-dimensional base");
  std::vector<SpacetimePoint> pts;
  for (double t : ts) {
    for (int k = 0; k < n_space; ++k) {
      double x = 0.0;
      if (base.kind() == BaseKind::Circle) {
        x = base.size() * k / n_space;
      } else {
        x = n_space == 1 ? 0.0 : -0.5 * base.size() + base.size() * k / (n_space - 1);
      }
      pts.push_back(SpacetimePoint::on_line(t, x));
    }
  }
  return pts;
}

ConvergenceReport run_convergence_experiment(const WarpingSequence& seq, const LimitMetric& limit,
                                             const ExperimentConfig& config) {
  const WarpedSpacetime reference(config.t0, config.t1, config.base, limit.f_inf);
  ConvergenceReport rep;
  rep.family = seq.name();
  rep.limit = limit.name();
  rep.points = config.samples.build(reference);
  rep.mass_note = "mass proxy lambda^m |I| vol(Sigma); boundary mass term omitted";
  const auto& pts = rep.points;

  std::vector<double> sample_times;
  for (const auto& p : pts) sample_times.push_back(p.t);
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());
  LatticeConfig lc = config.lattice;
  lc.extra_levels.insert(lc.extra_levels.end(), sample_times.begin(), sample_times.end());

  switch (limit.kind) {
    case LimitKind::D0Formula:
      rep.limit_matrix = FiniteMetricSpace::from_function(pts, [&](const auto& p, const auto& q) {
                           return evaluate_limit_d0(limit.h0, reference, p, q);
                         }).d;
      break;
    case LimitKind::DInfinity53:
      rep.limit_matrix = FiniteMetricSpace::from_function(pts, [&](const auto& p, const auto& q) {
                           return evaluate_limit_dinfty_53(reference, p, q);
                         }).d;
      break;
    case LimitKind::NullDistanceOfLimit:
      if (reference.is_product()) {
        rep.limit_matrix = FiniteMetricSpace::from_function(pts, [&](const auto& p, const auto& q) {
                             return product_distance(reference, p, q);
                           }).d;
      } else {
        rep.limit_matrix = CausalLattice(reference, TimeFunction::canonical(), lc).distance_matrix(pts);
      }
      break;
  }

  const double f_inf_min = reference.f_min();
  for (int j : seq.j_list) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.j = j;
    try {
      const WarpedSpacetime st(config.t0, config.t1, config.base, seq.member(j));
      const CausalLattice lattice(st, TimeFunction::canonical(), lc);
      row.d = lattice.distance_matrix(pts);
      row.tolerance = lattice.tolerance();
      row.nodes = lattice.node_count();
      std::vector<std::uint32_t> nodes;
      nodes.reserve(pts.size());
      for (const auto& p : pts) nodes.push_back(lattice.snap(p).node);
      for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = 0; b < pts.size(); ++b) {
          const double e = std::abs(row.d[a][b] - rep.limit_matrix[a][b]);
          if (e > row.eps) {
            row.eps = e;
            row.worst_i = a;
            row.worst_k = b;
          }
          if (b <= a) continue;
          const Bounds bb = warped_bounds(st, pts[a], pts[b]);
          const double tol = lattice.pair_tolerance(nodes[a], nodes[b]);
          if (row.d[a][b] < bb.lo - tol || row.d[a][b] > bb.hi + tol) {
            ++row.sandwich_violations;
          }
        }
      }
      row.gh_bound = gh_upper_bound(row.eps);
      row.lambda = seq.lambda(j);
      const MassProxy mp = mass_proxy(st, row.lambda);
      row.mass = mp.value;
      row.swif_bound = swif_upper_bound(row.eps, row.lambda, st.base().dimension(), mp.value);
      if (config.check_envelope && seq.kind == FamilyKind::UniformSine) {
        const double eps_f = 1.0 / j;
        if (eps_f < 0.25 * f_inf_min) {
          row.envelope_violations = 0;
          for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) {
              const Envelope env = pointwise_envelope(eps_f, f_inf_min, rep.limit_matrix[a][b]);
              if (row.d[a][b] < env.lo || row.d[a][b] > env.hi) ++row.envelope_violations;
            }
          }
        }
      }
    } catch (const NumericError& e) {
      throw NumericError("j = " + std::to_string(j) + ": " + e.what());
    } catch (const PreconditionError& e) {
      throw PreconditionError("j = " + std::to_string(j) + ": " + e.what());
    }
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.rows.push_back(std::move(row));
  }

  const auto& rows = rep.rows;
  bool nonincreasing = true;
  double min_eps = rows.front().eps;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    nonincreasing = nonincreasing && rows[i].eps <= rows[i - 1].eps + rows[i].tolerance;
    min_eps = std::min(min_eps, rows[i].eps);
  }
  const double first = rows.front().eps;
  const double last = rows.back().eps;
  const bool shrinking = rows.size() > 1 && last <= 0.5 * first;
  const bool negligible = last <= 3.0 * rows.back().tolerance;
  if (nonincreasing && (shrinking || negligible)) {
    rep.verdict = Verdict::ConvergesToLimit;
    rep.gap = 0.0;
  } else {
    rep.verdict = Verdict::BoundedAwayFromLimit;
    rep.gap = min_eps;
  }
  if (rep.verdict == Verdict::BoundedAwayFromLimit && !(rep.gap > 0.0)) {
    rep.verdict = Verdict::ConvergesToLimit;
  }
  return rep;
}

std::vector<FiberDiameter> fiber_diameters(const ConvergenceReport& report, std::size_t row) {
  if (row >= report.rows.size()) throw PreconditionError("row out of range");
  const ConvergenceRow& r = report.rows[row];
  std::map<double, double> diam;
  const auto& pts = report.points;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    diam.try_emplace(pts[a].t, 0.0);
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (pts[a].t != pts[b].t) continue;
      diam[pts[a].t] = std::max(diam[pts[a].t], r.d[a][b]);
    }
  }
  std::vector<FiberDiameter> out;
  for (const auto& [t, d] : diam) out.push_back({t, d, d <= 3.0 * r.tolerance});
  return out;
}

std::vector<FiberDiameter> collapse_diagnostic(const ConvergenceReport& report) {
  if (report.rows.empty()) throw PreconditionError("empty report");
  return fiber_diameters(report, report.rows.size() - 1);
}

std::string to_string(Verdict v) {
  return v == Verdict::ConvergesToLimit ? "converges_to_limit" : "bounded_away_from_limit";
}

}  // namespace nulldist

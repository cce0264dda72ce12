// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nulldist/causal_curves.hpp"
#include "nulldist/checks.hpp"
#include "nulldist/convergence.hpp"
#include "nulldist/metric_analysis.hpp"
#include "nulldist/null_distance.hpp"

using namespace nulldist;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kProductTol = 2e-2;
constexpr double kProductRuntimeS = 60.0;
constexpr double kOneSidedSlack = 1e-12;
constexpr double kNonAttainedCap = 2.05;
constexpr double kSqrtFormulaTol = 1e-12;
constexpr double kSqrtLimitTol = 1e-3;
constexpr double kReshapedTol = 2e-2;
constexpr double kExample51PairTol = 5e-2;
constexpr double kExample51GapFactor = 0.45;
constexpr double kExample53FiberTol = 5e-2;
constexpr double kCausalityTolFactor = 3.0;
constexpr double kCubeDefiniteness = 1e-2;
constexpr double kConformalTol = 1e-12;
constexpr double kBoundRelTol = 1e-15;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<void(Outcome&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

LatticeConfig grid(int n_time, int n_space) {
  LatticeConfig c;
  c.n_time = n_time;
  c.n_space = n_space;
  c.stencil = 4;
  return c;
}

double product_value(const WarpedSpacetime& st, const SpacetimePoint& p, const SpacetimePoint& q) {
  return std::max(std::abs(p.t - q.t), st.base().distance(p.x, q.x));
}

// Lattice matrix over an 8 x 8 node-snapped sample grid against max(|dt|, d_sigma).
void product_case(Outcome& o, const WarpedSpacetime& st, const LatticeConfig& cfg,
                  const char* name) {
  const CausalLattice lat(st, TimeFunction::canonical(), cfg);
  SampleSpec spec;
  spec.n_time = 8;
  spec.n_space = 8;
  const auto pts = lat.snap_points(spec.build(st));
  const auto d = lat.distance_matrix(pts);
  double worst = 0.0;
  double below = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double cf = product_value(st, pts[i], pts[j]);
      worst = std::max(worst, std::abs(d[i][j] - cf));
      below = std::max(below, cf - d[i][j]);
      ++pairs;
    }
  }
  o.detail << " " << name << " pairs=" << pairs << " max_err=" << worst
           << " max_below=" << below;
  o.require(worst <= kProductTol, std::string(name) + " error");
  o.require(below <= kOneSidedSlack, std::string(name) + " one-sided");
}

void criterion1(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  product_case(o, WarpedSpacetime::product(0, 2, BaseManifold::interval(4)), grid(401, 401),
               "minkowski");
  product_case(o, WarpedSpacetime::product(0, 2 * kPi, BaseManifold::circle(2 * kPi)),
               grid(401, 400), "circle");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs <= kProductRuntimeS, "runtime");
}

void criterion2(Outcome& o) {
  const WarpedSpacetime st(0, 2, BaseManifold::interval(4), WarpingFunction::quadratic());
  double prev = INFINITY;
  for (int n : {101, 201, 401}) {
    const CausalLattice lat(st, TimeFunction::canonical(), grid(n, n));
    const double v =
        lattice_distance(lat, SpacetimePoint::on_line(0, -1), SpacetimePoint::on_line(0, 1)).value;
    o.detail << " n=" << n << ":" << v;
    o.require(v > 2.0, "value above 2");
    o.require(v < prev, "strictly decreasing");
    prev = v;
  }
  o.require(prev <= kNonAttainedCap, "final within cap");
}

void criterion3(Outcome& o) {
  double worst = 0.0;
  double l20 = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const auto inst = fractal_family("sqrt_nonattained", i);
    // Literal closed form, evaluated with 50 digits to avoid cancellation.
    using Big = boost::multiprecision::cpp_bin_float_50;
    const Big two(2);
    const double oracle = static_cast<double>(
        pow(two, Big(i + 1) / 2) * (pow(two, Big(i - 1) / 2) - sqrt(pow(two, i - 1) - 1)));
    const double len = null_length(inst.curve, inst.tau);
    worst = std::max(worst, std::abs(len - oracle));
    if (i == 20) l20 = len;
  }
  o.detail << " sqrt_max_err=" << worst << " L20=" << l20;
  o.require(worst <= kSqrtFormulaTol, "sqrt family formula");
  o.require(std::abs(l20 - 1.0) <= kSqrtLimitTol, "sqrt family limit");
  bool exact = true;
  for (int i = 1; i <= 10; ++i) {
    const auto t2 = fractal_family("timelike_2", i);
    const auto n5 = fractal_family("null_5", i);
    exact = exact && null_length(t2.curve, t2.tau) == 2.0 && null_length(n5.curve, n5.tau) == 5.0;
  }
  o.detail << " timelike/null exact=" << exact;
  o.require(exact, "timelike_2 / null_5 exact");
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  const CausalLattice lat(st, TimeFunction::sqrt_reshaped(), grid(401, 401));
  const double v =
      lattice_distance(lat, SpacetimePoint::on_line(1, -1), SpacetimePoint::on_line(1, 1)).value;
  const double expect = 2.0 * (std::sqrt(2.0) - 1.0);
  o.detail << " reshaped=" << v << " vs " << expect;
  o.require(std::abs(v - expect) <= kReshapedTol, "reshaped sqrt distance");
}

void criterion4(Outcome& o) {
  std::mt19937_64 g(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0;
  std::size_t pairs = 0;
  for (int w = 0; w < 5; ++w) {
    // Continuous, kinked at three random knots, values in [0.4, 2.4].
    std::vector<double> knots_t{0.0, 0.5 + u(g), 1.0 + u(g) * 0.5, 2.0};
    std::vector<double> knots_v;
    for (int k = 0; k < 4; ++k) knots_v.push_back(0.4 + 2.0 * u(g));
    auto f = [knots_t, knots_v](double t) {
      for (std::size_t k = 0; k + 1 < knots_t.size(); ++k) {
        if (t <= knots_t[k + 1]) {
          const double s = (t - knots_t[k]) / (knots_t[k + 1] - knots_t[k]);
          return knots_v[k] + s * (knots_v[k + 1] - knots_v[k]);
        }
      }
      return knots_v.back();
    };
    WarpingFunction wf = WarpingFunction::custom(
        f, *std::min_element(knots_v.begin(), knots_v.end()),
        *std::max_element(knots_v.begin(), knots_v.end()), "kinked" + std::to_string(w));
    wf.breakpoints = {knots_t[1], knots_t[2]};
    const WarpedSpacetime st(0, 2, BaseManifold::circle(2 * kPi), wf);
    const CausalLattice lat(st, TimeFunction::canonical(), grid(201, 200));
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(lat.node_count() - 1));
    std::vector<std::uint32_t> sources;
    for (int k = 0; k < 64; ++k) sources.push_back(pick(g));
    for (std::uint32_t a : sources) {
      const std::uint32_t b = pick(g);
      const double d = lat.node_distance(a, b);
      const Bounds bb = warped_bounds(st, lat.node_point(a), lat.node_point(b));
      const double tol = lat.pair_tolerance(a, b);
      ++pairs;
      if (d < bb.lo - tol || d > bb.hi + tol) ++violations;
    }
  }
  o.detail << " warpings=5 pairs=" << pairs << " violations=" << violations;
  o.require(violations == 0, "sandwich");
}

void criterion5(Outcome& o) {
  ExperimentConfig c;
  c.t1 = 2;
  c.lattice = grid(401, 400);
  c.check_envelope = true;
  const auto rep = run_convergence_experiment(WarpingSequence::uniform_sine({4, 8, 16, 32}),
                                              LimitMetric::null_distance_of(WarpingFunction::one()),
                                              c);
  long checked = 0;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    o.detail << " j=" << r.j << ":eps=" << r.eps << ",env=" << r.envelope_violations;
    if (r.envelope_violations >= 0) {
      ++checked;
      o.require(r.envelope_violations == 0, "envelope at j=" + std::to_string(r.j));
    }
    if (k > 0) o.require(r.eps <= rep.rows[k - 1].eps, "eps nonincreasing");
  }
  o.require(checked == 3, "envelope applicable at j=8,16,32");
  o.require(rep.rows.back().eps <= rep.rows.front().eps / 4, "eps32 <= eps4/4");
}

void criterion6(Outcome& o) {
  ExperimentConfig c;
  c.t1 = 1;
  c.lattice = grid(401, 400);
  const auto rep = run_convergence_experiment(WarpingSequence::example51(0.5, {2, 4, 8, 16}),
                                              LimitMetric::d0(0.5), c);
  for (const auto& r : rep.rows) o.detail << " j=" << r.j << ":eps=" << r.eps;
  o.require(rep.rows.back().eps <= kExample51PairTol, "pair error at j=16");
  const auto st = WarpedSpacetime::product(0, 1, BaseManifold::circle(2 * kPi));
  double gap = -1.0;
  for (std::size_t a = 0; a < rep.points.size() && gap < 0; ++a) {
    for (std::size_t b = 0; b < rep.points.size(); ++b) {
      const auto& p = rep.points[a];
      const auto& q = rep.points[b];
      if (p.t == 0 && q.t == 0 && std::abs(st.base().distance(p.x, q.x) - kPi) < 1e-9) {
        gap = product_value(st, p, q) - rep.rows.back().d[a][b];
        break;
      }
    }
  }
  o.detail << " antipodal_gap=" << gap << " (need " << kExample51GapFactor * kPi << ")";
  o.require(gap >= kExample51GapFactor * kPi, "gap to product distance");
}

void criterion7(Outcome& o) {
  ExperimentConfig c;
  c.t1 = 1;
  c.lattice = grid(401, 400);
  const auto rep = run_convergence_experiment(WarpingSequence::example52(2.0, {2, 4, 8, 16}),
                                              LimitMetric::null_distance_of(WarpingFunction::one()),
                                              c);
  std::size_t sandwich = 0;
  for (const auto& r : rep.rows) {
    o.detail << " j=" << r.j << ":eps=" << r.eps << "<=" << 2.0 / r.j + r.tolerance;
    o.require(r.eps <= 2.0 / r.j + r.tolerance, "eps_j <= 2/j + tol at j=" + std::to_string(r.j));
    for (std::size_t a = 0; a < rep.points.size(); ++a) {
      for (std::size_t b = a + 1; b < rep.points.size(); ++b) {
        const double ds = rep.limit_matrix[a][b];
        const double d = r.d[a][b];
        if (d < ds - kOneSidedSlack || d > 2.0 * ds + r.tolerance) ++sandwich;
      }
    }
  }
  o.detail << " sandwich_violations=" << sandwich;
  o.require(sandwich == 0, "sandwich dsigma <= dj <= 2 dsigma");
}

void criterion8(Outcome& o) {
  ExperimentConfig c;
  c.t1 = 2;
  c.lattice = grid(201, 200);
  c.samples.times = {0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 2};
  const auto rep = run_convergence_experiment(
      WarpingSequence::example53({4, 8, 16, 32, 64, 128}), LimitMetric::dinfty53(), c);
  std::size_t mono = 0;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    for (std::size_t a = 0; a < rep.points.size(); ++a) {
      for (std::size_t b = 0; b < rep.points.size(); ++b) {
        if (rep.rows[k].d[a][b] > rep.rows[k - 1].d[a][b] + rep.rows[k].tolerance) ++mono;
      }
    }
  }
  o.detail << " monotonicity_violations=" << mono;
  o.require(mono == 0, "monotone in j");
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& r = rep.rows[k];
    for (const auto& f : fiber_diameters(rep, k)) {
      if (f.t == 0.5) {
        o.require(f.diameter <= kPi / r.j + 3 * r.tolerance,
                  "t=0.5 collapse at j=" + std::to_string(r.j));
      }
    }
    o.detail << " j=" << r.j << ":gh=" << r.gh_bound;
    if (k > 0) o.require(r.gh_bound < rep.rows[k - 1].gh_bound, "GH bound decreasing");
  }
  for (const auto& f : collapse_diagnostic(rep)) {
    if (f.t == 0.5) o.detail << " fiber(0.5)=" << f.diameter;
    if (f.t == 2.0) {
      o.detail << " fiber(2)=" << f.diameter;
      o.require(std::abs(f.diameter - std::min(kPi, 2.0)) <= kExample53FiberTol, "t=2 fiber");
    }
  }
}

void criterion9(Outcome& o) {
  for (const TimeFunction& tf : {TimeFunction::canonical(), TimeFunction::cubic_shift()}) {
    const WarpedSpacetime st(0, 1, BaseManifold::interval(2), WarpingFunction::quadratic());
    const CausalLattice lat(st, tf, grid(401, 401));
    const double tol = kCausalityTolFactor * lat.tolerance();
    const double margin = tol / (st.f_min() * tf.min_slope(0, 1));
    const auto pairs = sample_separated_pairs(lat, 200, margin, 7);
    const auto r = encodes_causality_check(lat, pairs, tol);
    o.detail << " " << tf.label() << ":related=" << r.related << "/" << r.pairs
             << ",violators=" << r.violators;
    o.require(r.violators == 0, "no violators for " + tf.label());
    o.require(r.related > 0 && r.related < r.pairs, "both kinds of pairs for " + tf.label());
  }
  for (const char* fam : {"removed_point", "removed_line"}) {
    const auto inst = fractal_family(fam, 4);
    LatticeConfig c = grid(401, 401);
    c.excisions = inst.excisions;
    const CausalLattice lat(inst.spacetime, inst.tau, c);
    std::vector<PointPair> pairs{{inst.curve.start(), inst.curve.end()}};
    for (double dx : {0.25, 0.5, 0.75}) {
      pairs.push_back({inst.curve.start(), SpacetimePoint::on_line(inst.curve.end().t,
                                                                   inst.curve.end().x[0] + dx)});
    }
    const auto r = encodes_causality_check(lat, pairs, kCausalityTolFactor * lat.tolerance());
    o.detail << " " << fam << ":violators=" << r.violators;
    o.require(r.violators >= 1, std::string(fam) + " negative control");
  }
  const auto st = WarpedSpacetime::product(-1, 1, BaseManifold::interval(2));
  const CausalLattice lat(st, TimeFunction::cube(), grid(801, 801));
  const auto space = FiniteMetricSpace::from_lattice(
      lat, {SpacetimePoint::on_line(0, -0.5), SpacetimePoint::on_line(0, 0),
            SpacetimePoint::on_line(0, 0.5)});
  const auto def = definiteness_check(space.d, kCubeDefiniteness);
  o.detail << " cube_min_offdiag=" << def.worst;
  o.require(!def.passed(), "cube definiteness check fails");
}

void criterion10(Outcome& o) {
  const WarpedSpacetime st(0, 2, BaseManifold::interval(4), WarpingFunction::quadratic());
  SampleSpec s;
  s.n_time = 5;
  s.n_space = 5;
  const auto pts = s.build(st);
  const auto r1 = conformal_invariance_check(st, TimeFunction::canonical(),
                                             {[](double) { return 3.0; }, "3"}, pts,
                                             grid(201, 201), 0.0);
  const auto r2 = conformal_invariance_check(st, TimeFunction::canonical(),
                                             {[](double t) { return 1 + t * t; }, "1+t^2"}, pts,
                                             grid(201, 201), kConformalTol);
  o.detail << " psi=3 bitwise=" << r1.bitwise_equal << " psi=1+t^2 diff=" << r2.max_abs_diff;
  o.require(r1.bitwise_equal, "bitwise under psi=3");
  o.require(r2.passed, "agreement under psi=1+t^2");
}

void axiom_case(Outcome& o, const CausalLattice& lat, const std::vector<SpacetimePoint>& pts,
                const char* name, bool expect_pass) {
  const auto space = FiniteMetricSpace::from_lattice(lat, pts);
  const auto r = metric_axiom_suite(space, LatticeMidpointOracle(lat), lat.tolerance());
  o.detail << " " << name << ":sym=" << r.symmetry.failures << ",tri=" << r.triangle.failures
           << ",mid=" << r.midpoint.failures;
  if (expect_pass) {
    o.require(r.passed(), name);
  } else {
    o.require(r.symmetry.passed() && r.triangle.passed(), std::string(name) + " metric part");
    o.require(!r.midpoint.passed(), std::string(name) + " midpoint must fail");
  }
}

void criterion11(Outcome& o) {
  {
    const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
    const CausalLattice lat(st, TimeFunction::canonical(), grid(201, 201));
    SampleSpec s;
    s.n_time = 5;
    s.n_space = 5;
    axiom_case(o, lat, s.build(st), "minkowski", true);
  }
  {
    const WarpedSpacetime st(0, 2, BaseManifold::interval(4), WarpingFunction::quadratic());
    const CausalLattice lat(st, TimeFunction::canonical(), grid(201, 201));
    SampleSpec s;
    s.n_time = 5;
    s.n_space = 5;
    axiom_case(o, lat, s.build(st), "quadratic", true);
  }
  {
    const WarpedSpacetime st(0, 2, BaseManifold::circle(2 * kPi), WarpingFunction::collapse(8));
    LatticeConfig c = grid(201, 200);
    SampleSpec s;
    s.times = {0, 0.5, 1.5, 2};
    s.n_space = 4;
    c.extra_levels = s.times;
    const CausalLattice lat(st, TimeFunction::canonical(), c);
    axiom_case(o, lat, s.build(st), "collapse_j8", true);
  }
  {
    const auto st = WarpedSpacetime::product(-1, 1, BaseManifold::interval(2));
    const CausalLattice lat(st, TimeFunction::step(), grid(201, 201));
    axiom_case(o, lat,
               {SpacetimePoint::on_line(0, 0), SpacetimePoint::on_line(0.5, 0),
                SpacetimePoint::on_line(-0.5, 0.25)},
               "step_tau", false);
  }
}

void criterion12(Outcome& o) {
  struct GhCase {
    double eps;
    double expect;
  };
  struct SwifCase {
    double eps;
    double lambda;
    int n;
    double mass;
    double expect;
  };
  const GhCase gh[] = {{0.0, 0.0}, {0.3, 0.6}, {1.0, 2.0}};
  const SwifCase swif[] = {{0.0, 2.0, 1, 8.0, 0.0}, {0.1, 2.0, 1, 8.0, 12.8}, {0.5, 1.0, 1, 1.0, 2.0}};
  double worst = 0.0;
  for (const auto& c : gh) {
    worst = std::max(worst, std::abs(gh_upper_bound(c.eps) - c.expect) / std::max(1.0, c.expect));
  }
  for (const auto& c : swif) {
    const double v = swif_upper_bound(c.eps, c.lambda, c.n, c.mass);
    worst = std::max(worst, std::abs(v - c.expect) / std::max(1.0, c.expect));
  }
  o.detail << " max_rel_err=" << worst;
  o.require(worst <= kBoundRelTol, "bound formulas");
}

}  // namespace

int main() {
  report(1, "product formula equivalence", criterion1);
  report(2, "warped non-attainment", criterion2);
  report(3, "fractal null lengths", criterion3);
  report(4, "bi-Lipschitz sandwich", criterion4);
  report(5, "pointwise envelopes", criterion5);
  report(6, "pinched band limit d0", criterion6);
  report(7, "widened band sandwich", criterion7);
  report(8, "fiber collapse", criterion8);
  report(9, "causality encoding", criterion9);
  report(10, "conformal invariance", criterion10);
  report(11, "metric axioms and midpoints", criterion11);
  report(12, "bound calculators", criterion12);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

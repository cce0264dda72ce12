// nulldist command line: distance queries, curve families, convergence runs, property checks.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nulldist/causal_curves.hpp"
#include "nulldist/checks.hpp"
#include "nulldist/convergence.hpp"
#include "nulldist/errors.hpp"
#include "nulldist/metric_analysis.hpp"
#include "nulldist/null_distance.hpp"
#include "nulldist/report_io.hpp"
#include "nulldist/scenario.hpp"

namespace {

using json = nlohmann::json;
using namespace nulldist;

enum Exit : int { kPass = 0, kPropertyFailure = 1, kInputError = 2, kNumericFailure = 3 };

struct LatticeFlags {
  std::optional<int> n_time;
  std::optional<int> n_space;
  std::optional<int> stencil;

  void add(CLI::App* app) {
    app->add_option("--n-time", n_time, "time levels")->check(CLI::PositiveNumber);
    app->add_option("--n-space", n_space, "base nodes")->check(CLI::PositiveNumber);
    app->add_option("--stencil", stencil, "largest hop in cells")->check(CLI::PositiveNumber);
  }
  void apply(LatticeConfig& c) const {
    if (n_time) c.n_time = *n_time;
    if (n_space) c.n_space = *n_space;
    if (stencil) c.stencil = *stencil;
  }
};

Scenario scenario_or_default(const std::string& path) {
  if (path.empty()) return parse_scenario("{}");
  return load_scenario(path);
}

std::string output_path(const Scenario& s, const std::string& flag, const std::string& key) {
  if (!flag.empty()) return flag;
  if (key.empty()) return {};
  return (std::filesystem::path(s.outputs.dir) / key).string();
}

void finish_record(const Scenario& s, RunRecord& rec,
                   std::chrono::steady_clock::time_point start) {
  if (rec.outputs.empty()) return;
  rec.scenario_hash = hex64(s.hash);
  rec.seed = s.seed;
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::filesystem::path dir = std::filesystem::path(rec.outputs.front().path).parent_path();
  const std::string path = (dir / "run_record.json").string();
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write run record '" + path + "'");
  out << run_record_json(rec);
}

// distance ------------------------------------------------------------------------------------

struct DistanceArgs {
  std::string scenario;
  std::string p;
  std::string q;
  std::string method;
  std::string out;
  LatticeFlags lattice;
};

int run_distance(const DistanceArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  Scenario s = scenario_or_default(a.scenario);
  a.lattice.apply(s.lattice);
  SpacetimePoint p = s.experiment.p;
  SpacetimePoint q = s.experiment.q;
  if (!a.p.empty()) p = parse_point(a.p);
  if (!a.q.empty()) q = parse_point(a.q);
  if (a.p.empty() && a.q.empty() && s.experiment.kind != "distance") {
    throw ParseError("distance needs --p and --q or a distance experiment in the scenario");
  }
  const Method m = a.method.empty() ? s.experiment.method : method_from_string(a.method);
  const WarpedSpacetime st = s.spacetime();
  const DistanceResult r = null_distance(st, s.tau(), p, q, m, s.lattice);
  const std::string text = distance_result_json(r, p, q);
  std::cout << text;
  RunRecord rec;
  const std::string path = output_path(s, a.out, s.outputs.json);
  if (!path.empty()) write_output(path, text, rec);
  finish_record(s, rec, start);
  return kPass;
}

// curve-length --------------------------------------------------------------------------------

struct CurveArgs {
  std::string family;
  std::vector<int> indices{1};
};

int run_curve_length(const CurveArgs& a) {
  json rows = json::array();
  bool ok = true;
  for (int i : a.indices) {
    const FractalInstance inst = fractal_family(a.family, i);
    inst.curve.validate(inst.spacetime);
    const double len = null_length(inst.curve, inst.tau);
    const double err = std::abs(len - inst.expected_length);
    const bool match = err <= 1e-12 * std::max(1.0, inst.expected_length);
    ok = ok && match;
    rows.push_back({{"index", i},
                    {"segments", inst.curve.size()},
                    {"null_length", len},
                    {"expected", inst.expected_length},
                    {"abs_error", err},
                    {"exact_arithmetic", inst.curve.exact_times().has_value() &&
                                             inst.tau.affine_slope().has_value()},
                    {"matches", match}});
  }
  const FractalInstance first = fractal_family(a.family, a.indices.front());
  json j = {{"family", a.family},
            {"spacetime", first.spacetime.describe()},
            {"limit_length", first.limit_length},
            {"rows", rows}};
  std::cout << j.dump(2) << "\n";
  return ok ? kPass : kPropertyFailure;
}

// converge ------------------------------------------------------------------------------------

struct ConvergeArgs {
  std::string scenario;
  std::string family;
  std::optional<double> h0;
  std::string js;
  std::string limit;
  std::string out;
  std::string plot;
  std::string csv;
  bool envelope = false;
  LatticeFlags lattice;
};

LimitMetric default_limit(const std::string& family, const std::string& requested, double h0) {
  std::string l = requested;
  if (l.empty()) {
    if (family == "example51") l = "d0";
    else if (family == "example53") l = "dinfty53";
    else l = "dsigma";
  }
  if (l == "dsigma") return LimitMetric::null_distance_of(WarpingFunction::one());
  if (l == "d0") return LimitMetric::d0(h0);
  if (l == "dinfty53") return LimitMetric::dinfty53();
  throw ParseError("unknown limit '" + l + "' (dsigma, d0, dinfty53)");
}

int run_converge(const ConvergeArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  Scenario s = scenario_or_default(a.scenario);
  a.lattice.apply(s.lattice);
  const std::string family = a.family.empty() ? s.experiment.family : a.family;
  if (family.empty()) throw ParseError("converge needs --family or experiment.family");
  const double h0 = a.h0 ? *a.h0 : s.experiment.h0;
  std::vector<int> js = a.js.empty() ? s.experiment.js : parse_int_list(a.js);
  if (js.empty()) throw ParseError("converge needs --j or experiment.j");
  const WarpingSequence seq = WarpingSequence::by_name(family, h0, js);
  const LimitMetric limit =
      default_limit(family, a.limit.empty() ? s.experiment.limit : a.limit, h0);

  ExperimentConfig cfg;
  cfg.t0 = s.t0;
  cfg.t1 = s.t1;
  cfg.base = s.base;
  cfg.lattice = s.lattice;
  cfg.samples = s.samples;
  cfg.check_envelope = a.envelope || seq.kind == FamilyKind::UniformSine;
  const ConvergenceReport rep = run_convergence_experiment(seq, limit, cfg);

  RunRecord rec;
  const std::string text = convergence_report_json(rep);
  const std::string json_path = output_path(s, a.out, s.outputs.json);
  if (!json_path.empty()) write_output(json_path, text, rec);
  const std::string svg_path = output_path(s, a.plot, s.outputs.svg);
  if (!svg_path.empty()) write_output(svg_path, convergence_svg(rep), rec);
  const std::string csv_path = output_path(s, a.csv, s.outputs.csv);
  if (!csv_path.empty()) write_output(csv_path, matrix_csv(rep.points, rep.rows.back().d), rec);
  for (const auto& r : rep.rows) rec.row_runtimes_s.push_back(r.runtime_s);
  finish_record(s, rec, start);

  std::cout << "family " << rep.family << " vs " << rep.limit << " (" << rep.points.size()
            << " points)\n";
  for (const auto& r : rep.rows) {
    std::cout << "  j=" << r.j << " eps=" << r.eps << " gh<=" << r.gh_bound
              << " swif<=" << r.swif_bound << " tol=" << r.tolerance
              << " sandwich_violations=" << r.sandwich_violations;
    if (r.envelope_violations >= 0) std::cout << " envelope_violations=" << r.envelope_violations;
    std::cout << "\n";
  }
  std::cout << "verdict " << to_string(rep.verdict);
  if (rep.verdict == Verdict::BoundedAwayFromLimit) std::cout << " gap=" << rep.gap;
  std::cout << "\n";
  if (seq.kind == FamilyKind::Example53) {
    for (const auto& f : collapse_diagnostic(rep)) {
      std::cout << "  fiber t=" << f.t << " diameter=" << f.diameter
                << (f.collapsed ? " collapsed" : "") << "\n";
    }
  }
  bool ok = true;
  for (const auto& r : rep.rows) {
    ok = ok && r.sandwich_violations == 0 && r.envelope_violations <= 0;
  }
  return ok ? kPass : kPropertyFailure;
}

// check ---------------------------------------------------------------------------------------

struct CheckArgs {
  std::string scenario;
  std::vector<std::string> suites;
  std::size_t pairs = 200;
  double tol_factor = 3.0;
  LatticeFlags lattice;
};

json causality_suite(const Scenario& s, const CausalLattice& lattice, const CheckArgs& a) {
  const WarpedSpacetime& st = lattice.spacetime();
  const TimeFunction& tf = lattice.time_function();
  const double tol = a.tol_factor * lattice.tolerance();
  const double slope = tf.min_slope(st.t0(), st.t1());
  if (!(slope > 0.0)) throw PreconditionError("causality suite needs a strictly increasing time function");
  const double margin = tol / (st.f_min() * slope);
  const auto pairs = sample_separated_pairs(lattice, a.pairs, margin, s.seed);
  const CausalityReport r = encodes_causality_check(lattice, pairs, tol);
  json ex = json::array();
  for (const auto& v : r.examples) {
    ex.push_back({{"p", {v.p.t, v.p.x[0]}}, {"q", {v.q.t, v.q.x[0]}}, {"dhat", v.dhat},
                  {"dtau", v.dtau}, {"related", v.related}});
  }
  return {{"suite", "causality"}, {"passed", r.passed()}, {"pairs", r.pairs},
          {"related", r.related}, {"violators", r.violators}, {"tolerance", r.tolerance},
          {"sampling_margin", margin}, {"max_related_error", r.max_related_error},
          {"min_unrelated_gap", r.min_unrelated_gap}, {"examples", ex}};
}

json axioms_suite(const Scenario& s, const CausalLattice& lattice) {
  const auto pts = s.samples.build(lattice.spacetime());
  const FiniteMetricSpace space = FiniteMetricSpace::from_lattice(lattice, pts);
  const AxiomSuite r = metric_axiom_suite(space, LatticeMidpointOracle(lattice), lattice.tolerance());
  auto one = [](const AxiomReport& x) {
    return json{{"failures", x.failures}, {"worst", x.worst}, {"tolerance", x.tolerance}};
  };
  return {{"suite", "axioms"}, {"passed", r.passed()}, {"points", pts.size()},
          {"symmetry", one(r.symmetry)}, {"triangle", one(r.triangle)},
          {"midpoint", one(r.midpoint)}};
}

json sandwich_suite(const Scenario& s, const CausalLattice& lattice) {
  if (!lattice.time_function().canonical_kind()) {
    throw PreconditionError("sandwich suite needs the canonical time function");
  }
  const WarpedSpacetime& st = lattice.spacetime();
  const auto pts = s.samples.build(st);
  const Matrix d = lattice.distance_matrix(pts);
  std::size_t violations = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::uint32_t a = lattice.snap(pts[i]).node;
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      const std::uint32_t b = lattice.snap(pts[k]).node;
      const Bounds bb = warped_bounds(st, lattice.node_point(a), lattice.node_point(b));
      const double tol = lattice.pair_tolerance(a, b);
      ++pairs;
      if (d[i][k] < bb.lo - tol || d[i][k] > bb.hi + tol) ++violations;
    }
  }
  return {{"suite", "sandwich"}, {"passed", violations == 0}, {"pairs", pairs},
          {"violations", violations}};
}

json conformal_suite(const Scenario& s) {
  if (!s.conformal_expr) throw PreconditionError("conformal suite needs a conformal_factor");
  const WarpedSpacetime plain(s.t0, s.t1, s.base, s.warping.build());
  const WarpedSpacetime scaled = s.spacetime();
  const auto pts = s.samples.build(plain);
  const ComparisonReport r = conformal_invariance_check(plain, s.tau(), *scaled.conformal(), pts,
                                                        s.lattice, 1e-12);
  return {{"suite", "conformal"}, {"passed", r.passed}, {"max_abs_diff", r.max_abs_diff},
          {"bitwise_equal", r.bitwise_equal}, {"tolerance", r.tolerance}};
}

int run_check(const CheckArgs& a) {
  Scenario s = scenario_or_default(a.scenario);
  a.lattice.apply(s.lattice);
  std::vector<std::string> suites = a.suites.empty() ? s.experiment.suites : a.suites;
  if (suites.empty()) suites = {"axioms", "causality"};
  const CausalLattice lattice(s.spacetime(), s.tau(), s.lattice);
  json results = json::array();
  bool ok = true;
  for (const auto& name : suites) {
    json r;
    if (name == "causality") r = causality_suite(s, lattice, a);
    else if (name == "axioms") r = axioms_suite(s, lattice);
    else if (name == "sandwich") r = sandwich_suite(s, lattice);
    else if (name == "conformal") r = conformal_suite(s);
    else throw ParseError("unknown suite '" + name + "' (causality, axioms, sandwich, conformal)");
    ok = ok && r.at("passed").get<bool>();
    results.push_back(r);
  }
  json j = {{"spacetime", lattice.spacetime().describe()},
            {"time_function", lattice.time_function().label()},
            {"lattice_tolerance", lattice.tolerance()},
            {"passed", ok},
            {"suites", results}};
  std::cout << j.dump(2) << "\n";
  return ok ? kPass : kPropertyFailure;
}

// registry ------------------------------------------------------------------------------------

int run_registry_list() {
  auto show = [](const char* title, const std::vector<std::string>& names) {
    std::cout << title << ":";
    for (const auto& n : names) std::cout << " " << n;
    std::cout << "\n";
  };
  show("warpings", warping_registry_names());
  show("time_functions", time_function_registry_names());
  show("sequences", family_names());
  show("curve_families", fractal_family_names());
  show("limits", {"dsigma", "d0", "dinfty53"});
  show("suites", {"causality", "axioms", "sandwich", "conformal"});
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nulldist: null distances on warped product spacetimes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  DistanceArgs dist;
  auto* cmd_dist = app.add_subcommand("distance", "null distance between two points");
  cmd_dist->add_option("--scenario", dist.scenario, "scenario JSON");
  cmd_dist->add_option("--p", dist.p, "first point \"t,x\"");
  cmd_dist->add_option("--q", dist.q, "second point \"t,x\"");
  cmd_dist->add_option("--method", dist.method, "lattice, closed or profile");
  cmd_dist->add_option("--out", dist.out, "write the result JSON here");
  dist.lattice.add(cmd_dist);

  CurveArgs curve;
  auto* cmd_curve = app.add_subcommand("curve-length", "null length of a curve family member");
  cmd_curve->add_option("--family", curve.family, "curve family")->required();
  cmd_curve->add_option("--index", curve.indices, "family indices")->expected(1, -1)->delimiter(',');

  ConvergeArgs conv;
  auto* cmd_conv = app.add_subcommand("converge", "convergence of a warping sequence");
  cmd_conv->add_option("--scenario", conv.scenario, "scenario JSON");
  cmd_conv->add_option("--family", conv.family, "uniform_sine, example51, example52, example53");
  cmd_conv->add_option("--h0", conv.h0, "band height");
  cmd_conv->add_option("--j", conv.js, "comma separated j list");
  cmd_conv->add_option("--limit", conv.limit, "dsigma, d0 or dinfty53");
  cmd_conv->add_option("--out", conv.out, "report JSON");
  cmd_conv->add_option("--plot", conv.plot, "log-log SVG of eps_j and bounds");
  cmd_conv->add_option("--csv", conv.csv, "distance matrix at the largest j");
  cmd_conv->add_flag("--envelope", conv.envelope, "check pointwise envelopes");
  conv.lattice.add(cmd_conv);

  CheckArgs chk;
  auto* cmd_check = app.add_subcommand("check", "property suites on a scenario");
  cmd_check->add_option("--scenario", chk.scenario, "scenario JSON");
  cmd_check->add_option("--suite", chk.suites, "causality, axioms, sandwich, conformal");
  cmd_check->add_option("--pairs", chk.pairs, "sampled pairs for causality");
  cmd_check->add_option("--tol-factor", chk.tol_factor, "multiple of the lattice tolerance");
  chk.lattice.add(cmd_check);

  auto* cmd_reg = app.add_subcommand("registry", "registered components");
  cmd_reg->require_subcommand(1);
  auto* cmd_list = cmd_reg->add_subcommand("list", "list registry ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*cmd_dist) return run_distance(dist);
    if (*cmd_curve) return run_curve_length(curve);
    if (*cmd_conv) return run_converge(conv);
    if (*cmd_check) return run_check(chk);
    if (*cmd_list) return run_registry_list();
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kInputError;
}

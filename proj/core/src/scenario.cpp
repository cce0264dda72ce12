#include "nulldist/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

using json = nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ParseError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

SpacetimePoint point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(path + ": expected [t, x]");
  }
  return SpacetimePoint::on_line(v[0].get<double>(), v[1].get<double>());
}

BaseManifold parse_base(const json& b) {
  check_keys(b, {"kind", "length", "circumference", "sides", "radius"}, "base");
  const std::string kind = text(b, "kind", "base");
  if (kind == "interval") return BaseManifold::interval(number(b, "length", "base"));
  if (kind == "circle") return BaseManifold::circle(number(b, "circumference", "base"));
  if (kind == "flat_torus") {
    const json& s = b.at("sides");
    if (!s.is_array() || s.size() != 2) throw ParseError("base.sides: expected [l1, l2]");
    return BaseManifold::flat_torus(s[0].get<double>(), s[1].get<double>());
  }
  if (kind == "round_sphere") return BaseManifold::round_sphere(number(b, "radius", "base"));
  throw ParseError("base.kind: unknown base '" + kind + "'");
}

WarpingSpec parse_warping(const json& w) {
  check_keys(w, {"registry", "expr", "h0", "j", "c", "fmin", "fmax"}, "warping");
  WarpingSpec s;
  s.registry.clear();
  if (w.contains("registry")) s.registry = text(w, "registry", "warping");
  if (w.contains("expr")) s.expr = text(w, "expr", "warping");
  if (s.registry.empty() == s.expr.empty()) {
    throw ParseError("warping: give exactly one of 'registry' or 'expr'");
  }
  if (w.contains("h0")) s.h0 = number(w, "h0", "warping");
  if (w.contains("j")) s.j = integer(w, "j", "warping");
  if (w.contains("c")) s.constant = number(w, "c", "warping");
  if (w.contains("fmin")) s.f_min = number(w, "fmin", "warping");
  if (w.contains("fmax")) s.f_max = number(w, "fmax", "warping");
  return s;
}

LatticeConfig parse_lattice(const json& l) {
  check_keys(l, {"n_time", "n_space", "stencil", "excisions", "excision_radius_cells", "extra_levels"},
             "lattice");
  LatticeConfig c;
  if (l.contains("n_time")) c.n_time = integer(l, "n_time", "lattice");
  if (l.contains("n_space")) c.n_space = integer(l, "n_space", "lattice");
  if (l.contains("stencil")) c.stencil = integer(l, "stencil", "lattice");
  if (l.contains("excision_radius_cells")) {
    c.excision_radius_cells = number(l, "excision_radius_cells", "lattice");
  }
  if (l.contains("extra_levels")) c.extra_levels = l.at("extra_levels").get<std::vector<double>>();
  if (l.contains("excisions")) {
    for (const json& e : l.at("excisions")) {
      check_keys(e, {"t", "x", "x_lo", "x_hi"}, "lattice.excisions[]");
      const double t = number(e, "t", "lattice.excisions[]");
      if (e.contains("x")) {
        c.excisions.push_back(Excision::point(t, number(e, "x", "lattice.excisions[]")));
      } else {
        c.excisions.push_back(Excision::segment(t, number(e, "x_lo", "lattice.excisions[]"),
                                                number(e, "x_hi", "lattice.excisions[]")));
      }
    }
  }
  return c;
}

}  // namespace

WarpingFunction WarpingSpec::build() const {
  if (!expr.empty()) return WarpingFunction::expression(expr, f_min, f_max);
  if (registry == "one") return WarpingFunction::one();
  if (registry == "constant") return WarpingFunction::constant(constant);
  if (registry == "t2plus1") return WarpingFunction::quadratic();
  if (registry == "uniform_sine") return WarpingFunction::uniform_sine(j);
  if (registry == "example51") {
    if (!(h0 > 0.0 && h0 < 1.0)) throw PreconditionError("example51 needs h0 in (0,1)");
    return WarpingFunction::band(h0, j);
  }
  if (registry == "example52") {
    if (!(h0 > 1.0)) throw PreconditionError("example52 needs h0 > 1");
    return WarpingFunction::band(h0, j);
  }
  if (registry == "example53") return WarpingFunction::collapse(j);
  throw ParseError("warping.registry: unknown warping '" + registry + "'");
}

WarpedSpacetime Scenario::spacetime() const {
  std::optional<ConformalFactor> psi;
  if (conformal_expr) {
    Expression e = Expression::parse(*conformal_expr);
    psi = ConformalFactor{[e](double t) { return e(t); }, *conformal_expr};
  }
  return {t0, t1, base, warping.build(), psi};
}

TimeFunction Scenario::tau() const {
  if (time_expr) return TimeFunction::from_expression(*time_expr);
  return time_function_by_name(time_function);
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario s;
  try {
    check_keys(root, {"name", "interval", "base", "warping", "conformal_factor", "time_function",
                      "lattice", "samples", "seed", "experiment", "outputs"},
               "");
    if (root.contains("interval")) {
      const json& iv = root.at("interval");
      if (!iv.is_array() || iv.size() != 2) throw ParseError("interval: expected [t0, t1]");
      s.t0 = iv[0].get<double>();
      s.t1 = iv[1].get<double>();
    }
    if (root.contains("base")) s.base = parse_base(root.at("base"));
    if (root.contains("warping")) s.warping = parse_warping(root.at("warping"));
    if (root.contains("conformal_factor")) {
      const json& c = root.at("conformal_factor");
      check_keys(c, {"expr"}, "conformal_factor");
      s.conformal_expr = text(c, "expr", "conformal_factor");
    }
    if (root.contains("time_function")) {
      const json& tf = root.at("time_function");
      if (tf.is_string()) {
        s.time_function = tf.get<std::string>();
      } else {
        check_keys(tf, {"registry", "expr"}, "time_function");
        if (tf.contains("registry")) s.time_function = text(tf, "registry", "time_function");
        if (tf.contains("expr")) s.time_expr = text(tf, "expr", "time_function");
      }
    }
    if (root.contains("lattice")) s.lattice = parse_lattice(root.at("lattice"));
    if (root.contains("samples")) {
      const json& sm = root.at("samples");
      check_keys(sm, {"times", "n_time", "n_space"}, "samples");
      if (sm.contains("times")) s.samples.times = sm.at("times").get<std::vector<double>>();
      if (sm.contains("n_time")) s.samples.n_time = integer(sm, "n_time", "samples");
      if (sm.contains("n_space")) s.samples.n_space = integer(sm, "n_space", "samples");
    }
    if (root.contains("seed")) s.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("experiment")) {
      const json& e = root.at("experiment");
      check_keys(e, {"kind", "p", "q", "method", "family", "h0", "j", "j_list", "limit",
                     "suites"},
                 "experiment");
      ExperimentSpec& x = s.experiment;
      x.kind = text(e, "kind", "experiment");
      if (x.kind != "distance" && x.kind != "converge" && x.kind != "check") {
        throw ParseError("experiment.kind: unknown experiment '" + x.kind + "'");
      }
      if (e.contains("p")) x.p = point(e.at("p"), "experiment.p");
      if (e.contains("q")) x.q = point(e.at("q"), "experiment.q");
      if (e.contains("method")) x.method = method_from_string(text(e, "method", "experiment"));
      if (e.contains("family")) {
        x.family = text(e, "family", "experiment");
        const auto names = family_names();
        if (std::find(names.begin(), names.end(), x.family) == names.end()) {
          throw ParseError("experiment.family: unknown family '" + x.family + "'");
        }
      }
      if (e.contains("h0")) x.h0 = number(e, "h0", "experiment");
      if (e.contains("j") && e.contains("j_list")) {
        throw ParseError("experiment: give 'j' or 'j_list', not both");
      }
      if (e.contains("j")) x.js = e.at("j").get<std::vector<int>>();
      if (e.contains("j_list")) x.js = e.at("j_list").get<std::vector<int>>();
      if (e.contains("limit")) x.limit = text(e, "limit", "experiment");
      if (e.contains("suites")) x.suites = e.at("suites").get<std::vector<std::string>>();
    }
    if (root.contains("outputs")) {
      const json& o = root.at("outputs");
      check_keys(o, {"dir", "json", "csv", "svg"}, "outputs");
      if (o.contains("dir")) s.outputs.dir = text(o, "dir", "outputs");
      if (o.contains("json")) s.outputs.json = text(o, "json", "outputs");
      if (o.contains("csv")) s.outputs.csv = text(o, "csv", "outputs");
      if (o.contains("svg")) s.outputs.svg = text(o, "svg", "outputs");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  s.canonical = root.dump();
  s.hash = fnv1a64(s.canonical);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read scenario file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_scenario(os.str());
}

SpacetimePoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("point '" + text + "': expected 't,x'");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, comma);
    const std::string b = text.substr(comma + 1);
    const double t = std::stod(a, &used_a);
    const double x = std::stod(b, &used_b);
    if (a.find_first_not_of(" \t", used_a) != std::string::npos ||
        b.find_first_not_of(" \t", used_b) != std::string::npos) {
      throw ParseError("point '" + text + "': trailing characters");
    }
    return SpacetimePoint::on_line(t, x);
  } catch (const std::logic_error&) {
    throw ParseError("point '" + text + "': expected two numbers 't,x'");
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ParseError("list '" + text + "': '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

}  // namespace nulldist

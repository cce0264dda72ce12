#include "nulldist/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nulldist/errors.hpp"
#include "nulldist/scenario.hpp"

namespace nulldist {

namespace {

using json = nlohmann::json;

json point_json(const SpacetimePoint& p) {
  json x = json::array();
  for (int i = 0; i < p.x.dim; ++i) x.push_back(p.x[i]);
  return {{"t", p.t}, {"x", x}};
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

}  // namespace

std::string distance_result_json(const DistanceResult& r, const SpacetimePoint& p,
                                 const SpacetimePoint& q) {
  json j = {{"p", point_json(p)},
            {"q", point_json(q)},
            {"value", r.value},
            {"lower_bound", r.lower_bound},
            {"upper_bound", r.upper_bound},
            {"method", to_string(r.method)},
            {"resolution", r.resolution},
            {"snap_dt", r.snap_dt},
            {"snap_dx", r.snap_dx},
            {"nodes", r.nodes}};
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2) + "\n";
}

std::string convergence_report_json(const ConvergenceReport& report) {
  json rows = json::array();
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const ConvergenceRow& r = report.rows[k];
    json fibers = json::array();
    for (const auto& f : fiber_diameters(report, k)) {
      fibers.push_back({{"t", f.t}, {"diameter", f.diameter}, {"collapsed", f.collapsed}});
    }
    json row = {{"j", r.j},
                {"eps", r.eps},
                {"gh_bound", r.gh_bound},
                {"swif_bound", r.swif_bound},
                {"lambda", r.lambda},
                {"mass_proxy", r.mass},
                {"lattice_tolerance", r.tolerance},
                {"nodes", r.nodes},
                {"worst_pair", {point_json(report.points[r.worst_i]), point_json(report.points[r.worst_k])}},
                {"sandwich_violations", r.sandwich_violations},
                {"fibers", fibers}};
    if (r.envelope_violations >= 0) {
      row["envelope_violations"] = r.envelope_violations;
    } else {
      row["envelope_violations"] = nullptr;
    }
    rows.push_back(row);
  }
  json j = {{"family", report.family},
            {"limit", report.limit},
            {"sample_size", report.points.size()},
            {"eps_is_sample_estimate", true},
            {"verdict", to_string(report.verdict)},
            {"gap", report.gap},
            {"mass_note", report.mass_note},
            {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string matrix_csv(const std::vector<SpacetimePoint>& points, const Matrix& d) {
  std::ostringstream os;
  os.precision(17);
  os << "point";
  for (const auto& p : points) {
    os << "," << p.t << ":" << p.x[0];
    if (p.x.dim == 2) os << ":" << p.x[1];
  }
  os << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << points[i].t << ":" << points[i].x[0];
    if (points[i].x.dim == 2) os << ":" << points[i].x[1];
    for (double v : d[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

std::string convergence_svg(const ConvergenceReport& report) {
  constexpr double kW = 640.0;
  constexpr double kH = 420.0;
  constexpr double kL = 70.0;
  constexpr double kR = 20.0;
  constexpr double kT = 30.0;
  constexpr double kB = 50.0;
  struct Series {
    std::string name;
    std::string color;
    std::vector<double> y;
  };
  std::vector<Series> series{{"eps_j", "#1f77b4", {}}, {"GH bound", "#d62728", {}},
                             {"SWIF bound", "#2ca02c", {}}};
  std::vector<double> xs;
  for (const auto& r : report.rows) {
    xs.push_back(r.j);
    series[0].y.push_back(r.eps);
    series[1].y.push_back(r.gh_bound);
    series[2].y.push_back(r.swif_bound);
  }
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (v > 0.0) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  }
  if (!std::isfinite(ymin)) {
    ymin = 1e-3;
    ymax = 1.0;
  }
  const double ly0 = std::floor(std::log10(ymin));
  const double ly1 = std::max(ly0 + 1.0, std::ceil(std::log10(ymax)));
  const double lx0 = std::log10(std::max(1.0, xs.empty() ? 1.0 : xs.front()));
  const double lx1 = std::max(lx0 + 1e-9, std::log10(xs.empty() ? 10.0 : xs.back()));
  auto px = [&](double x) {
    const double span = lx1 - lx0 < 1e-6 ? 1.0 : lx1 - lx0;
    return kL + (std::log10(x) - lx0) / span * (kW - kL - kR);
  };
  auto py = [&](double y) { return kT + (ly1 - std::log10(y)) / (ly1 - ly0) * (kH - kT - kB); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kL << "\" y=\"18\">" << report.family << " vs " << report.limit
     << " (log-log)</text>\n";
  os << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
     << kH - kB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
     << "\" stroke=\"black\"/>\n";
  for (double e = ly0; e <= ly1 + 1e-9; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    os << "<line x1=\"" << kL - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kL << "\" y2=\""
       << fmt(y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kL - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">1e"
       << static_cast<int>(e) << "</text>\n";
  }
  for (double x : xs) {
    os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kH - kB + 16
       << "\" text-anchor=\"middle\">" << x << "</text>\n";
  }
  os << "<text x=\"" << (kW + kL) / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">j</text>\n";
  int legend = 0;
  for (const auto& s : series) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (s.y[i] > 0.0) pts << fmt(px(xs[i])) << "," << fmt(py(s.y[i])) << " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\""
       << pts.str() << "\"/>\n";
    const double ly = kT + 14.0 * legend++;
    os << "<text x=\"" << kW - kR - 110 << "\" y=\"" << ly + 10 << "\" fill=\"" << s.color
       << "\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string run_record_json(const RunRecord& record) {
  json outs = json::array();
  for (const auto& o : record.outputs) outs.push_back({{"path", o.path}, {"fnv1a64", o.hash}});
  json j = {{"scenario_hash", record.scenario_hash},
            {"version", record.version},
            {"seed", record.seed},
            {"wall_time_s", record.wall_time_s},
            {"outputs", outs}};
  if (!record.row_runtimes_s.empty()) j["row_runtimes_s"] = record.row_runtimes_s;
  return j.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& contents, RunRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write output file '" + path + "'");
  out << contents;
  if (!out) throw NumericError("failed while writing '" + path + "'");
  record.outputs.push_back({path, hex64(fnv1a64(contents))});
}

}  // namespace nulldist

#include "nulldist/metric_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nulldist/errors.hpp"

namespace nulldist {

FiniteMetricSpace FiniteMetricSpace::from_lattice(const CausalLattice& lattice,
                                                  const std::vector<SpacetimePoint>& points,
                                                  std::string label) {
  return {points, lattice.distance_matrix(points), std::move(label)};
}

FiniteMetricSpace FiniteMetricSpace::from_function(
    const std::vector<SpacetimePoint>& points,
    const std::function<double(const SpacetimePoint&, const SpacetimePoint&)>& dist,
    std::string label) {
  const std::size_t n = points.size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = dist(points[i], points[j]);
      d[j][i] = d[i][j];
    }
  }
  return {points, std::move(d), std::move(label)};
}

double FiniteMetricSpace::min_off_diagonal() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i != j) m = std::min(m, d[i][j]);
    }
  }
  return m;
}

AxiomReport symmetry_check(const Matrix& d, double tol) {
  AxiomReport r;
  r.tolerance = tol;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].size() != d.size()) throw PreconditionError("distance matrix is not square");
    const double diag = std::abs(d[i][i]);
    r.worst = std::max(r.worst, diag);
    if (diag > tol) ++r.failures;
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const double e = std::abs(d[i][j] - d[j][i]);
      r.worst = std::max(r.worst, e);
      if (e > tol) ++r.failures;
    }
  }
  return r;
}

AxiomReport triangle_check(const Matrix& d, double tol) {
  AxiomReport r;
  r.tolerance = tol;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double e = d[i][k] - d[i][j] - d[j][k];
        r.worst = std::max(r.worst, e);
        if (e > tol) ++r.failures;
      }
    }
  }
  return r;
}

AxiomReport definiteness_check(const Matrix& d, double tol) {
  AxiomReport r;
  r.tolerance = tol;
  r.worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      r.worst = std::min(r.worst, d[i][j]);
      if (d[i][j] <= tol) ++r.failures;
    }
  }
  return r;
}

MetricAxiomsReport metric_axioms_check(const FiniteMetricSpace& space, double tol, double tol_def) {
  return {symmetry_check(space.d, 0.0), triangle_check(space.d, tol),
          definiteness_check(space.d, tol_def)};
}

std::vector<float> LatticeMidpointOracle::candidate_distances(const SpacetimePoint& p) const {
  const std::vector<double> field = lattice_.distances_from(lattice_.snap(p).node);
  std::vector<float> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    out[i] = std::isfinite(field[i]) ? static_cast<float>(field[i])
                                     : std::numeric_limits<float>::infinity();
  }
  return out;
}

std::vector<float> FunctionMidpointOracle::candidate_distances(const SpacetimePoint& p) const {
  std::vector<float> out;
  out.reserve(candidates_.size());
  for (const auto& c : candidates_) out.push_back(static_cast<float>(dist_(p, c)));
  return out;
}

AxiomReport midpoint_check(const FiniteMetricSpace& space, const MidpointOracle& oracle,
                           double tol) {
  AxiomReport r;
  r.tolerance = tol;
  std::vector<std::vector<float>> fields;
  fields.reserve(space.size());
  for (const auto& p : space.points) fields.push_back(oracle.candidate_distances(p));
  for (std::size_t a = 0; a < space.size(); ++a) {
    for (std::size_t b = a + 1; b < space.size(); ++b) {
      const auto& fa = fields[a];
      const auto& fb = fields[b];
      float best = std::numeric_limits<float>::infinity();
      for (std::size_t c = 0; c < fa.size(); ++c) best = std::min(best, std::max(fa[c], fb[c]));
      const double excess = static_cast<double>(best) - 0.5 * space.d[a][b];
      r.worst = std::max(r.worst, excess);
      if (excess > tol) ++r.failures;
    }
  }
  return r;
}

AxiomSuite metric_axiom_suite(const FiniteMetricSpace& space, const MidpointOracle& oracle,
                              double tol) {
  return {symmetry_check(space.d, 0.0), triangle_check(space.d, 2.0 * tol),
          midpoint_check(space, oracle, tol)};
}

double gh_upper_bound(double eps) {
  if (!(eps >= 0.0)) throw PreconditionError("distortion must be non-negative");
  return 2.0 * eps;
}

double swif_upper_bound(double eps, double lambda, int n, double mass) {
  if (!(lambda >= 1.0)) throw DomainError("swif bound needs lambda >= 1");
  if (!(eps >= 0.0) || n < 1 || !(mass >= 0.0)) {
    throw PreconditionError("swif bound needs eps >= 0, n >= 1, mass >= 0");
  }
  return std::pow(2.0, 0.5 * (n + 1)) * std::pow(lambda, n + 1) * (2.0 * eps) * mass;
}

MassProxy mass_proxy(double duration, const BaseManifold& base, double lambda) {
  if (!(lambda >= 1.0)) throw DomainError("lambda must be >= 1");
  if (!(duration >= 0.0)) throw PreconditionError("duration must be non-negative");
  const int m = 1 + base.dimension();
  return {std::pow(lambda, m) * duration * base.volume(), m};
}

MassProxy mass_proxy(const WarpedSpacetime& st, double lambda) {
  return mass_proxy(st.duration(), st.base(), lambda);
}

double uniform_distortion(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw PreconditionError("matrices differ in size");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  }
  return worst;
}

double uniform_distance(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  if (a.points.size() != b.points.size()) throw DomainError("point lists differ in size");
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const SpacetimePoint& p = a.points[i];
    const SpacetimePoint& q = b.points[i];
    if (p.t != q.t || p.x.dim != q.x.dim || p.x.coords != q.x.coords) {
      throw DomainError("point lists differ at index " + std::to_string(i));
    }
  }
  return uniform_distortion(a.d, b.d);
}

double hausdorff_distance(const FiniteMetricSpace& ambient, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance needs nonempty sets");
  const std::size_t n = ambient.size();
  for (std::size_t i : a) {
    if (i >= n) throw DomainError("index out of range");
  }
  for (std::size_t i : b) {
    if (i >= n) throw DomainError("index out of range");
  }
  auto directed = [&](const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
    double worst = 0.0;
    for (std::size_t i : from) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j : to) best = std::min(best, ambient.d[i][j]);
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace nulldist

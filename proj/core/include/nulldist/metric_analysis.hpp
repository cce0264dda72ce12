#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nulldist/checks.hpp"
#include "nulldist/lattice.hpp"

namespace nulldist {

/// Sample points with their pairwise distances.
struct FiniteMetricSpace {
  std::vector<SpacetimePoint> points;
  Matrix d;
  std::string label;

  std::size_t size() const { return points.size(); }
  /// Smallest off-diagonal entry (+infinity below two points).
  double min_off_diagonal() const;
  bool definite() const { return min_off_diagonal() > 0.0; }
  static FiniteMetricSpace from_lattice(const CausalLattice& lattice,
                                        const std::vector<SpacetimePoint>& points,
                                        std::string label = {});
  /// Distances from a closed-form or other pointwise evaluator.
  static FiniteMetricSpace from_function(
      const std::vector<SpacetimePoint>& points,
      const std::function<double(const SpacetimePoint&, const SpacetimePoint&)>& dist,
      std::string label = {});
};

struct AxiomReport {
  double worst = 0.0;  // largest defect found
  std::size_t failures = 0;
  double tolerance = 0.0;
  bool passed() const { return failures == 0; }
};

/// |d(i,j) - d(j,i)| and nonzero diagonal; tolerance 0 means exact.
AxiomReport symmetry_check(const Matrix& d, double tol = 0.0);
/// d(i,k) - d(i,j) - d(j,k).
AxiomReport triangle_check(const Matrix& d, double tol);

/// Off-diagonal entries at or below tol; worst holds the smallest off-diagonal entry.
AxiomReport definiteness_check(const Matrix& d, double tol);

/// Symmetry (exact), triangle within tol and definiteness above tol_def.
struct MetricAxiomsReport {
  AxiomReport symmetry;
  AxiomReport triangle;
  AxiomReport definiteness;
  bool passed() const { return symmetry.passed() && triangle.passed() && definiteness.passed(); }
};
MetricAxiomsReport metric_axioms_check(const FiniteMetricSpace& space, double tol, double tol_def);

/// Distances from each sample point to a common candidate set (for midpoint search).
class MidpointOracle {
 public:
  virtual ~MidpointOracle() = default;
  virtual std::vector<float> candidate_distances(const SpacetimePoint& p) const = 0;
};

/// Candidates are all lattice nodes.
class LatticeMidpointOracle : public MidpointOracle {
 public:
  explicit LatticeMidpointOracle(const CausalLattice& lattice) : lattice_(lattice) {}
  std::vector<float> candidate_distances(const SpacetimePoint& p) const override;

 private:
  const CausalLattice& lattice_;
};

/// Candidates are a fixed list evaluated with a pointwise distance.
class FunctionMidpointOracle : public MidpointOracle {
 public:
  FunctionMidpointOracle(std::vector<SpacetimePoint> candidates,
                         std::function<double(const SpacetimePoint&, const SpacetimePoint&)> dist)
      : candidates_(std::move(candidates)), dist_(std::move(dist)) {}
  std::vector<float> candidate_distances(const SpacetimePoint& p) const override;

 private:
  std::vector<SpacetimePoint> candidates_;
  std::function<double(const SpacetimePoint&, const SpacetimePoint&)> dist_;
};

/// For each pair: min over candidates m of max(d(p,m), d(m,q)) - d(p,q)/2 must be <= tol.
AxiomReport midpoint_check(const FiniteMetricSpace& space, const MidpointOracle& oracle,
                           double tol);

struct AxiomSuite {
  AxiomReport symmetry;
  AxiomReport triangle;
  AxiomReport midpoint;
  bool passed() const { return symmetry.passed() && triangle.passed() && midpoint.passed(); }
};

/// Symmetry exact, triangle within 2 tol, midpoint within tol.
AxiomSuite metric_axiom_suite(const FiniteMetricSpace& space, const MidpointOracle& oracle,
                              double tol);

/// Gromov-Hausdorff bound 2 eps from a uniform eps-distortion.
double gh_upper_bound(double eps);
/// 2^{(n+1)/2} lambda^{n+1} 2 eps mass.
double swif_upper_bound(double eps, double lambda, int n, double mass);

struct MassProxy {
  double value = 0.0;
  int exponent = 0;
};
/// lambda^m |I| vol(Sigma), m = 1 + dim Sigma.
MassProxy mass_proxy(const WarpedSpacetime& st, double lambda);
MassProxy mass_proxy(double duration, const BaseManifold& base, double lambda);

/// max |a - b| over entries.
double uniform_distortion(const Matrix& a, const Matrix& b);
/// Uniform distance between two metrics on the same point list (a lower estimate of the sup).
double uniform_distance(const FiniteMetricSpace& a, const FiniteMetricSpace& b);
/// Hausdorff distance between index subsets of one finite metric space.
double hausdorff_distance(const FiniteMetricSpace& ambient, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b);

}  // namespace nulldist

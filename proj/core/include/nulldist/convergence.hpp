#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nulldist/lattice.hpp"
#include "nulldist/metric_analysis.hpp"

namespace nulldist {

enum class FamilyKind { UniformSine, Example51, Example52, Example53 };

/// j -> f_j together with the family's structural bounds.
struct WarpingSequence {
  FamilyKind kind = FamilyKind::UniformSine;
  double h0 = 0.5;
  std::vector<int> j_list;

  static WarpingSequence uniform_sine(std::vector<int> js);
  static WarpingSequence example51(double h0, std::vector<int> js);
  static WarpingSequence example52(double h0, std::vector<int> js);
  static WarpingSequence example53(std::vector<int> js);
  static WarpingSequence by_name(const std::string& name, double h0, std::vector<int> js);

  std::string name() const;
  WarpingFunction member(int j) const;
  /// Bi-Lipschitz constant lambda >= 1 with 1/lambda <= f_j <= lambda.
  double lambda(int j) const;
};

std::vector<std::string> family_names();

enum class LimitKind { NullDistanceOfLimit, D0Formula, DInfinity53 };

struct LimitMetric {
  LimitKind kind = LimitKind::NullDistanceOfLimit;
  double h0 = 0.5;
  /// Limit warping for NullDistanceOfLimit; f = 1 uses the product closed form.
  WarpingFunction f_inf = WarpingFunction::one();

  static LimitMetric null_distance_of(WarpingFunction f) { return {LimitKind::NullDistanceOfLimit, 0.0, std::move(f)}; }
  static LimitMetric d0(double h0) { return {LimitKind::D0Formula, h0, WarpingFunction::one()}; }
  static LimitMetric dinfty53() { return {LimitKind::DInfinity53, 0.0, WarpingFunction::one()}; }
  std::string name() const;
};

/// min{ dhat_sigma, t(p) + t(q) + h0 max(0, d_sigma - t(p) - t(q)) }.
double evaluate_limit_d0(double h0, const WarpedSpacetime& st, const SpacetimePoint& p,
                         const SpacetimePoint& q);
/// min{ dhat_sigma, t(p) - 1 + t(q) - 1 } when both times exceed 1, else |t(p) - t(q)|.
double evaluate_limit_dinfty_53(const WarpedSpacetime& st, const SpacetimePoint& p,
                                const SpacetimePoint& q);

struct Envelope {
  double lo = 0.0;
  double hi = 0.0;
};
/// hi = d + eps (1 + 8 eps / f_min + 8 d / f_min), lo = d - eps (1 + 3 d / f_min); 0 < eps < f_min/4.
Envelope pointwise_envelope(double eps, double f_min, double d_inf);

struct SampleSpec {
  std::vector<double> times;  // empty: n_time evenly spaced over I
  int n_time = 8;
  int n_space = 8;
  /// Points on the grid times x (k C / n_space) for circles, evenly spaced for intervals.
  std::vector<SpacetimePoint> build(const WarpedSpacetime& st) const;
};

struct ExperimentConfig {
  double t0 = 0.0;
  double t1 = 2.0;
  BaseManifold base = BaseManifold::circle(6.283185307179586);
  LatticeConfig lattice;
  SampleSpec samples;
  bool check_envelope = false;
};

struct ConvergenceRow {
  int j = 0;
  double eps = 0.0;
  double gh_bound = 0.0;
  double swif_bound = 0.0;
  double lambda = 1.0;
  double mass = 0.0;
  double tolerance = 0.0;
  std::size_t worst_i = 0;
  std::size_t worst_k = 0;
  std::size_t nodes = 0;
  std::size_t sandwich_violations = 0;
  /// -1 when the envelope is not applicable (eps outside (0, f_min/4)).
  long envelope_violations = -1;
  double runtime_s = 0.0;
  Matrix d;
};

enum class Verdict { ConvergesToLimit, BoundedAwayFromLimit };

struct ConvergenceReport {
  std::string family;
  std::string limit;
  std::vector<SpacetimePoint> points;
  Matrix limit_matrix;
  std::vector<ConvergenceRow> rows;
  Verdict verdict = Verdict::ConvergesToLimit;
  double gap = 0.0;
  std::string mass_note;
};

ConvergenceReport run_convergence_experiment(const WarpingSequence& seq, const LimitMetric& limit,
                                             const ExperimentConfig& config);

struct FiberDiameter {
  double t = 0.0;
  double diameter = 0.0;
  bool collapsed = false;
};

/// Fiber diameters sup_{x,y} d((t,x),(t,y)) per sampled time level of one row.
std::vector<FiberDiameter> fiber_diameters(const ConvergenceReport& report, std::size_t row);
/// Fiber diameters at the largest j; collapse flagged below 3x lattice tolerance.
std::vector<FiberDiameter> collapse_diagnostic(const ConvergenceReport& report);

std::string to_string(Verdict v);

}  // namespace nulldist

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nulldist/lattice.hpp"
#include "nulldist/null_distance.hpp"

namespace nulldist {

using PointPair = std::pair<SpacetimePoint, SpacetimePoint>;
using Matrix = std::vector<std::vector<double>>;

struct CausalityViolation {
  SpacetimePoint p;
  SpacetimePoint q;
  double dhat = 0.0;
  double dtau = 0.0;
  bool related = false;
};

struct CausalityReport {
  std::size_t pairs = 0;
  std::size_t related = 0;
  std::size_t violators = 0;
  double tolerance = 0.0;
  double max_related_error = 0.0;   // max |dhat - |dtau|| over related pairs
  double min_unrelated_gap = 0.0;   // min dhat - |dtau| over unrelated pairs
  std::vector<CausalityViolation> examples;
  bool passed() const { return violators == 0; }
};

/// Checks dhat(p, q) == |tau(q) - tau(p)| (within tol) exactly for causally related pairs.
/// Relatedness comes from the analytic cone on excision-free lattices and from lattice
/// future reachability otherwise.
CausalityReport encodes_causality_check(const CausalLattice& lattice,
                                        const std::vector<PointPair>& pairs, double tol);

/// Random node pairs whose cone excess |d_sigma - reach| exceeds margin (decidable pairs).
std::vector<PointPair> sample_separated_pairs(const CausalLattice& lattice, std::size_t count,
                                              double margin, std::uint64_t seed);

struct ComparisonReport {
  double max_abs_diff = 0.0;
  bool bitwise_equal = true;
  bool passed = false;
  double tolerance = 0.0;
};

/// Lattice distances of st and of psi^2 st over the sample points.
ComparisonReport conformal_invariance_check(const WarpedSpacetime& st, const TimeFunction& tf,
                                            const ConformalFactor& psi,
                                            const std::vector<SpacetimePoint>& points,
                                            const LatticeConfig& config, double tol);

/// For f_narrow <= f_wide pointwise: dhat_narrow <= dhat_wide up to both lattice tolerances.
ComparisonReport cone_monotonicity_check(const WarpedSpacetime& narrow,
                                         const WarpedSpacetime& wide, const TimeFunction& tf,
                                         const std::vector<SpacetimePoint>& points,
                                         const LatticeConfig& config);

struct AntiLipschitzEstimate {
  double modulus = 0.0;
  std::size_t causal_pairs = 0;
  bool conclusive() const { return causal_pairs > 0; }
};

/// Smallest ratio (tau(q) - tau(p)) / sqrt(dt^2 + d_sigma^2) over causally related sample
/// pairs: the largest C with tau anti-Lipschitz against the product background distance.
/// Inconclusive when no distinct sample pair is causally related.
AntiLipschitzEstimate anti_lipschitz_modulus(const WarpedSpacetime& st, const TimeFunction& tf,
                                             const std::vector<SpacetimePoint>& samples);

struct CompletenessCertificate {
  double modulus = 0.0;
  double worst_ratio = 0.0;  // min dhat / background over distinct sample pairs
  bool trivial = false;      // no distinct sample pairs
  bool holds = false;
};

/// dhat >= C * background on every sample pair, C the anti-Lipschitz modulus (C > 0 required).
CompletenessCertificate completeness_certificate(const WarpedSpacetime& st, const TimeFunction& tf,
                                                 const std::vector<SpacetimePoint>& samples,
                                                 const Matrix& dhat);

/// Product background distance sqrt(dt^2 + d_sigma^2).
double background_distance(const WarpedSpacetime& st, const SpacetimePoint& p,
                           const SpacetimePoint& q);

}  // namespace nulldist

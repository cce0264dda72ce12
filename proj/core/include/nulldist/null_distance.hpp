#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nulldist/lattice.hpp"
#include "nulldist/spacetime.hpp"

namespace nulldist {

enum class Method { Lattice, ClosedForm, Profile };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Invariant: lower_bound <= value <= upper_bound.
struct DistanceResult {
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Method method = Method::Lattice;
  double resolution = 0.0;  // lattice tolerance or profile step
  double snap_dt = 0.0;
  double snap_dx = 0.0;
  std::size_t nodes = 0;
  std::string note;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Product closed form max(|dt|, d_sigma) for f = 1, or |tau(q) - tau(p)| for causal pairs.
std::optional<double> closed_form_distance(const WarpedSpacetime& st, const TimeFunction& tf,
                                           const SpacetimePoint& p, const SpacetimePoint& q);

/// Bracket for the canonical null distance of a warped product: [dt, dt] for causal pairs,
/// otherwise the intersection of [f_min d_sigma, f_max d_sigma] with the product comparison
/// [min(1, f_min) D, max(1, f_max) D], D = max(|dt|, d_sigma).
Bounds warped_bounds(const WarpedSpacetime& st, const SpacetimePoint& p, const SpacetimePoint& q);

/// Lattice value between snapped points, with slack for snapping and bracket from the bounds.
DistanceResult lattice_distance(const CausalLattice& lattice, const SpacetimePoint& p,
                                 const SpacetimePoint& q);

/// Time-profile dynamic program along the base geodesic from p to q (canonical time function).
/// The profile l(u), u in [0, d_sigma], pays max(f(l), |l'|) per unit base length, which is
/// the cost of an arbitrarily fine zig-zag around l; vertical moves pay |dt|.
DistanceResult profile_null_distance(const WarpedSpacetime& st, const SpacetimePoint& p,
                                     const SpacetimePoint& q, int n_levels);

DistanceResult null_distance(const WarpedSpacetime& st, const TimeFunction& tf,
                             const SpacetimePoint& p, const SpacetimePoint& q, Method method,
                             const LatticeConfig& config = {});

}  // namespace nulldist

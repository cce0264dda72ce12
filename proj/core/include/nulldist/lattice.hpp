#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nulldist/spacetime.hpp"

namespace nulldist {

struct LatticeConfig {
  int n_time = 401;   // nominal number of time levels
  int n_space = 401;  // base nodes (Interval: including both ends; Circle: around the loop)
  int stencil = 4;    // largest base hop of a null edge, in cells
  std::vector<Excision> excisions;
  double excision_radius_cells = 1.5;
  std::vector<double> extra_levels;  // times that must appear as levels (sample times)
};

/// Node index plus how far the query point had to move to reach it.
struct Snap {
  std::uint32_t node = 0;
  double dt = 0.0;
  double dx = 0.0;
  bool exact() const { return dt == 0.0 && dx == 0.0; }
};

/// Causal lattice on I x Sigma for one-dimensional Sigma.
///
/// Levels are spaced uniformly in conformal time eta = int dt / f with step ds / m, so a hop
/// of k cells between levels k*m apart is exactly null. Interval endpoints, time function
/// jumps and requested extra times are inserted as additional levels. Edges: vertical steps
/// between adjacent levels and, for each hop 1..stencil, the lowest level that the hop can
/// causally reach. Weights are |tau(t') - tau(t)|; both time directions are allowed.
class CausalLattice {
 public:
  CausalLattice(const WarpedSpacetime& st, const TimeFunction& tf, LatticeConfig config);

  const WarpedSpacetime& spacetime() const { return st_; }
  const TimeFunction& time_function() const { return tf_; }
  const LatticeConfig& config() const { return config_; }

  std::size_t level_count() const { return times_.size(); }
  std::size_t space_count() const { return static_cast<std::size_t>(n_space_); }
  std::size_t node_count() const { return times_.size() * space_count(); }
  double level_time(std::size_t i) const { return times_[i]; }
  double level_eta(std::size_t i) const { return eta_[i]; }
  double space_step() const { return ds_; }
  int eta_refinement() const { return m_; }
  double max_time_step() const { return max_dt_; }
  double excision_radius() const { return hole_radius_; }
  bool deleted(std::uint32_t node) const { return !removed_.empty() && removed_[node] != 0; }

  /// Twice the largest single-cell cost (vertical step or one-cell null hop), jumps excluded.
  double tolerance() const { return tolerance_; }
  /// Extra cost a path may pay at an inserted level that is off the aligned eta grid:
  /// the larger tau step to the aligned levels around it, 0 on aligned levels.
  double level_slack(std::size_t level) const { return slack_[level]; }
  /// tolerance() plus the level slack of both endpoints.
  double pair_tolerance(std::uint32_t a, std::uint32_t b) const {
    return tolerance_ + slack_[a / space_count()] + slack_[b / space_count()];
  }

  double node_x(std::size_t j) const;
  SpacetimePoint node_point(std::uint32_t node) const;
  std::uint32_t node_index(std::size_t level, std::size_t j) const {
    return static_cast<std::uint32_t>(level * space_count() + j);
  }

  /// Nearest non-excised node. Throws DomainError for points inside an excision guard.
  Snap snap(const SpacetimePoint& p) const;

  /// Replaces each point by its lattice node.
  std::vector<SpacetimePoint> snap_points(const std::vector<SpacetimePoint>& points) const;

  /// Dijkstra field from one node. Unreached nodes hold +infinity.
  std::vector<double> distances_from(std::uint32_t source) const;
  /// Shortest path value between two nodes; UnreachableError if none.
  double node_distance(std::uint32_t a, std::uint32_t b) const;
  /// Matrix over points (snapped). Exactly symmetric; uses rotation invariance on circles.
  std::vector<std::vector<double>> distance_matrix(const std::vector<SpacetimePoint>& points) const;
  /// Nodes reachable from `from` along future-directed edges.
  std::vector<std::uint8_t> future_set(std::uint32_t from) const;
  bool future_reachable(const SpacetimePoint& p, const SpacetimePoint& q) const;

  double tau_at_level(std::size_t i) const { return tau_[i]; }

 private:
  template <typename Visit>
  void for_each_edge(std::uint32_t node, Visit&& visit) const;
  bool edge_blocked(std::size_t la, std::size_t ja, std::size_t lb, long jb_unwrapped) const;
  void build_levels();
  void build_edges();
  void apply_excisions();
  void compute_tolerance();
  long wrap_space(long j) const;

  WarpedSpacetime st_;
  TimeFunction tf_;
  LatticeConfig config_;
  bool periodic_ = false;
  int n_space_ = 0;
  double ds_ = 0.0;
  double x0_ = 0.0;
  int m_ = 1;
  double deta_ = 0.0;
  std::vector<double> times_;
  std::vector<double> eta_;
  std::vector<double> tau_;
  double max_dt_ = 0.0;
  // up_[i * stencil + (k-1)]: lowest level reachable by a k-cell hop from level i (or -1).
  std::vector<std::int32_t> up_;
  // Levels l with up_[l][k] == i form the contiguous range [rev_lo_, rev_hi_].
  std::vector<std::int32_t> rev_lo_;
  std::vector<std::int32_t> rev_hi_;
  std::vector<std::uint8_t> removed_;
  double hole_radius_ = 0.0;
  double tolerance_ = 0.0;
  std::vector<double> slack_;
};

}  // namespace nulldist

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nulldist/checks.hpp"
#include "nulldist/convergence.hpp"
#include "nulldist/null_distance.hpp"

namespace nulldist {

inline constexpr const char* kVersion = "0.3.0";

std::string distance_result_json(const DistanceResult& r, const SpacetimePoint& p,
                                 const SpacetimePoint& q);
/// Runtimes are left out so reruns produce identical files; they live in the run record.
std::string convergence_report_json(const ConvergenceReport& report);
/// Header line lists the points as "t:x"; one row per point.
std::string matrix_csv(const std::vector<SpacetimePoint>& points, const Matrix& d);
/// Log-log plot of eps_j, GH and SWIF bounds against j.
std::string convergence_svg(const ConvergenceReport& report);

struct OutputEntry {
  std::string path;
  std::string hash;
};

struct RunRecord {
  std::string scenario_hash;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::vector<OutputEntry> outputs;
  std::vector<double> row_runtimes_s;
};

std::string run_record_json(const RunRecord& record);

/// Writes text to path and records it in the manifest.
void write_output(const std::string& path, const std::string& contents, RunRecord& record);

}  // namespace nulldist

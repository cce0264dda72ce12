#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nulldist/convergence.hpp"
#include "nulldist/null_distance.hpp"

namespace nulldist {

struct WarpingSpec {
  std::string registry = "one";  // empty when an expression is used
  std::string expr;
  double h0 = 0.5;
  int j = 1;
  double constant = 1.0;
  std::optional<double> f_min;
  std::optional<double> f_max;

  WarpingFunction build() const;
};

struct ExperimentSpec {
  std::string kind;  // "distance", "converge", "check" or empty
  SpacetimePoint p;
  SpacetimePoint q;
  Method method = Method::Lattice;
  std::string family;
  double h0 = 0.5;
  std::vector<int> js;
  std::string limit;  // "dsigma", "d0", "dinfty53"
  std::vector<std::string> suites;
};

struct OutputSpec {
  std::string dir = ".";
  std::string json;
  std::string csv;
  std::string svg;
};

/// Parsed scenario file. Unknown keys are rejected with the offending key path.
struct Scenario {
  double t0 = 0.0;
  double t1 = 2.0;
  BaseManifold base = BaseManifold::circle(6.283185307179586);
  WarpingSpec warping;
  std::optional<std::string> conformal_expr;
  std::string time_function = "canonical";
  std::optional<std::string> time_expr;
  LatticeConfig lattice;
  SampleSpec samples;
  std::uint64_t seed = 0;
  ExperimentSpec experiment;
  OutputSpec outputs;
  std::string canonical;  // normalized JSON text used for hashing
  std::uint64_t hash = 0;

  WarpedSpacetime spacetime() const;
  TimeFunction tau() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Parses "a,b" into a spacetime point (t, x) on a one-dimensional base.
SpacetimePoint parse_point(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace nulldist

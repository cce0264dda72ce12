#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "nulldist/errors.hpp"
#include "nulldist/report_io.hpp"
#include "nulldist/scenario.hpp"

namespace nulldist {
namespace {

using json = nlohmann::json;

const char* kMinkowski = R"({"interval": [0, 2], "base": {"kind": "interval", "length": 4},
                            "warping": {"registry": "one"}})";

TEST(Scenario, MinimalMinkowskiLoads) {
  const Scenario s = parse_scenario(kMinkowski);
  EXPECT_EQ(s.t0, 0.0);
  EXPECT_EQ(s.t1, 2.0);
  EXPECT_EQ(s.base.kind(), BaseKind::Interval);
  EXPECT_TRUE(s.spacetime().is_product());
  EXPECT_TRUE(s.tau().canonical_kind());
}

TEST(Scenario, UnknownKeyIsNamed) {
  try {
    parse_scenario(R"({"interval": [0, 2], "warpingg": {"registry": "one"}})");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("warpingg"), std::string::npos) << e.what();
  }
}

TEST(Scenario, NestedUnknownKeyCarriesPath) {
  try {
    parse_scenario(R"({"lattice": {"n_time": 11, "stencill": 4}})");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("lattice.stencill"), std::string::npos) << e.what();
  }
}

TEST(Scenario, Example53WithJList) {
  const Scenario s = parse_scenario(R"({
    "base": {"kind": "circle", "circumference": 6.283185307179586},
    "experiment": {"kind": "converge", "family": "example53", "j_list": [4, 8, 16, 32]}})");
  EXPECT_EQ(s.experiment.family, "example53");
  EXPECT_EQ(s.experiment.js, (std::vector<int>{4, 8, 16, 32}));
  const auto seq = WarpingSequence::by_name(s.experiment.family, s.experiment.h0, s.experiment.js);
  EXPECT_EQ(seq.j_list.size(), 4u);
}

TEST(Scenario, RejectsBadInput) {
  EXPECT_THROW(parse_scenario("{not json"), ParseError);
  EXPECT_THROW(parse_scenario(R"({"experiment": {"kind": "converge", "family": "example99"}})"),
               ParseError);
  EXPECT_THROW(parse_scenario(R"({"experiment": {"kind": "dance"}})"), ParseError);
  EXPECT_THROW(parse_scenario(R"({"interval": [0]})"), ParseError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ParseError);
}

TEST(Scenario, ExpressionWarpingAndTime) {
  const Scenario s = parse_scenario(R"js({"interval": [0, 1],
    "warping": {"expr": "2 + sin(t)"}, "time_function": {"expr": "t + t^3"}})js");
  EXPECT_NEAR(s.spacetime().warping()(0), 2.0, 1e-15);
  EXPECT_NEAR(s.tau()(1), 2.0, 1e-15);
}

TEST(Scenario, HashIsStableAndSensitive) {
  const Scenario a = parse_scenario(kMinkowski);
  const Scenario b = parse_scenario(kMinkowski);
  EXPECT_EQ(a.hash, b.hash);
  const Scenario c = parse_scenario(R"({"interval": [0, 3]})");
  EXPECT_NE(a.hash, c.hash);
}

TEST(Scenario, PointsAndLists) {
  EXPECT_EQ(parse_point("0.5,-1"), SpacetimePoint::on_line(0.5, -1));
  EXPECT_THROW(parse_point("0.5"), ParseError);
  EXPECT_EQ(parse_int_list("4,8,16"), (std::vector<int>{4, 8, 16}));
  EXPECT_THROW(parse_int_list("4,x"), ParseError);
}

TEST(Hashing, KnownVectors) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(Reports, DistanceCarriesMethodAndBounds) {
  DistanceResult r;
  r.value = 1.25;
  r.lower_bound = 1.0;
  r.upper_bound = 1.5;
  r.method = Method::Lattice;
  r.resolution = 0.01;
  const json j = json::parse(distance_result_json(r, SpacetimePoint::on_line(0, -1),
                                                  SpacetimePoint::on_line(0, 1)));
  EXPECT_EQ(j.at("method"), "lattice");
  EXPECT_EQ(j.at("value"), 1.25);
  EXPECT_EQ(j.at("lower_bound"), 1.0);
  EXPECT_EQ(j.at("upper_bound"), 1.5);
  EXPECT_EQ(j.at("resolution"), 0.01);
}

TEST(Reports, ConvergenceOutputsAreDeterministic) {
  ExperimentConfig c;
  c.t1 = 1;
  c.lattice.n_time = 41;
  c.lattice.n_space = 40;
  c.samples.n_time = 2;
  c.samples.n_space = 3;
  const auto seq = WarpingSequence::example51(0.5, {2, 4});
  const auto a = run_convergence_experiment(seq, LimitMetric::d0(0.5), c);
  const auto b = run_convergence_experiment(seq, LimitMetric::d0(0.5), c);
  EXPECT_EQ(convergence_report_json(a), convergence_report_json(b));
  EXPECT_EQ(matrix_csv(a.points, a.rows[0].d), matrix_csv(b.points, b.rows[0].d));
  EXPECT_EQ(convergence_svg(a), convergence_svg(b));
  const json j = json::parse(convergence_report_json(a));
  EXPECT_EQ(j.at("rows").size(), 2u);
  EXPECT_FALSE(j.at("rows")[0].contains("runtime_s"));
  EXPECT_NE(convergence_svg(a).find("<svg"), std::string::npos);
}

TEST(Reports, ManifestHashesWrittenFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "nulldist_manifest_test";
  std::filesystem::create_directories(dir);
  RunRecord rec;
  const std::string path = (dir / "out.txt").string();
  write_output(path, "abc", rec);
  ASSERT_EQ(rec.outputs.size(), 1u);
  EXPECT_EQ(rec.outputs[0].hash, hex64(fnv1a64("abc")));
  std::ifstream in(path);
  std::string back;
  std::getline(in, back);
  EXPECT_EQ(back, "abc");
  const json j = json::parse(run_record_json(rec));
  EXPECT_EQ(j.at("outputs").size(), 1u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace nulldist

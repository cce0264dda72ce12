#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "generators.hpp"
#include "nulldist/causal_curves.hpp"
#include "nulldist/errors.hpp"

namespace nulldist {
namespace {

// The literal closed form cancels badly in double precision, so evaluate it with 50 digits.
double sqrt_family_oracle(int i) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big two(2);
  const Big a = pow(two, Big(i + 1) / 2);
  const Big b = pow(two, Big(i - 1) / 2);
  const Big c = sqrt(pow(two, i - 1) - 1);
  return static_cast<double>(a * (b - c));
}

TEST(NullLength, TimelikeBetaOne) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  const auto beta = PiecewiseCausalCurve::through(
      {SpacetimePoint::on_line(0, 0), SpacetimePoint::on_line(1.5, 0.5),
       SpacetimePoint::on_line(1, 1)});
  EXPECT_TRUE(beta.defects(st).empty());
  EXPECT_DOUBLE_EQ(null_length(beta, TimeFunction::canonical()), 2.0);
}

TEST(NullLength, SingleNullSegment) {
  const auto c = PiecewiseCausalCurve::through(
      {SpacetimePoint::on_line(0.1, 0), SpacetimePoint::on_line(0.8, 0.7)});
  EXPECT_NEAR(null_length(c, TimeFunction::canonical()), 0.7, 1e-15);
}

TEST(NullLength, SqrtBetaOne) {
  const auto inst = fractal_family("sqrt_nonattained", 1);
  EXPECT_DOUBLE_EQ(null_length(inst.curve, inst.tau), 2.0);
}

TEST(NullLength, AdditiveUnderConcatenation) {
  testgen::Engine g(4);
  const auto st = WarpedSpacetime::product(0, 4, BaseManifold::interval(8));
  const auto tf = TimeFunction::cubic_shift();
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<SpacetimePoint> v;
    v.push_back(SpacetimePoint::on_line(testgen::uniform(g, 1, 3), 0));
    const int n = testgen::uniform_int(g, 2, 8);
    for (int k = 0; k < n; ++k) {
      const auto& last = v.back();
      const double dt = testgen::uniform(g, -0.4, 0.4);
      const double t = std::clamp(last.t + dt, 0.0, 4.0);
      const double dx = testgen::uniform(g, -1, 1) * std::abs(t - last.t);
      v.push_back(SpacetimePoint::on_line(t, std::clamp(last.x[0] + dx, -4.0, 4.0)));
    }
    const std::size_t cut = v.size() / 2;
    const auto whole = PiecewiseCausalCurve::through(v);
    const auto head = PiecewiseCausalCurve::through({v.begin(), v.begin() + cut + 1});
    const auto tail = PiecewiseCausalCurve::through({v.begin() + cut, v.end()});
    EXPECT_TRUE(whole.defects(st).empty());
    EXPECT_NEAR(null_length(whole, tf), null_length(head, tf) + null_length(tail, tf), 1e-12);
    std::vector<SpacetimePoint> rev(v.rbegin(), v.rend());
    EXPECT_NEAR(null_length(PiecewiseCausalCurve::through(rev), tf), null_length(whole, tf),
                1e-12);
    EXPECT_GE(null_length(whole, tf), std::abs(tf(v.back().t) - tf(v.front().t)) - 1e-12);
  }
}

TEST(Validate, ReportsEveryDefect) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  CausalSegment spacelike = make_segment(SpacetimePoint::on_line(0, 0),
                                         SpacetimePoint::on_line(0.5, 1.5));
  CausalSegment fine = make_segment(SpacetimePoint::on_line(0.6, 1.5),
                                    SpacetimePoint::on_line(1.0, 1.5));
  CausalSegment backwards = fine;
  backwards.direction = Direction::Past;
  const PiecewiseCausalCurve c({spacelike, fine, backwards});
  const auto d = c.defects(st);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[0].segment, 0u);
  EXPECT_NE(d[0].reason.find("spacelike"), std::string::npos);
  EXPECT_EQ(d[1].segment, 1u);
  EXPECT_NE(d[1].reason.find("discontinuous"), std::string::npos);
  EXPECT_EQ(d[2].segment, 2u);
  EXPECT_EQ(d[3].segment, 2u);
  EXPECT_THROW(c.validate(st), PreconditionError);
  EXPECT_EQ(c.find_defect(st)->segment, 0u);
}

TEST(Validate, EmptyAndOutside) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  EXPECT_EQ(PiecewiseCausalCurve().defects(st).size(), 1u);
  const auto out = PiecewiseCausalCurve::through(
      {SpacetimePoint::on_line(1, 1.5), SpacetimePoint::on_line(2.5, 1.5)});
  EXPECT_FALSE(out.defects(st).empty());
}

TEST(Zigzag, UnitWarpingBandAtBottom) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  const auto z = generate_zigzag(st, SpacetimePoint::on_line(0, -1), SpacetimePoint::on_line(0, 1),
                                 2, 0, 1);
  EXPECT_TRUE(z.defects(st).empty());
  EXPECT_NEAR(null_length(z, TimeFunction::canonical()), 2.0, 1e-12);
  EXPECT_EQ(z.start(), SpacetimePoint::on_line(0, -1));
  EXPECT_NEAR(z.end().x[0], 1.0, 1e-12);
}

TEST(Zigzag, AdmissibleOnRandomWarpings) {
  testgen::Engine g(19);
  for (int rep = 0; rep < 40; ++rep) {
    const WarpedSpacetime st(0, 3, BaseManifold::circle(6), testgen::smooth_warping(g));
    const double lo = testgen::uniform(g, 0, 1);
    const double hi = lo + testgen::uniform(g, 0.5, 1.5);
    const SpacetimePoint p{testgen::uniform(g, lo, 3), BasePoint::line(testgen::uniform(g, 0, 6))};
    const SpacetimePoint q{testgen::uniform(g, lo, 3), BasePoint::line(testgen::uniform(g, 0, 6))};
    try {
      const auto z = generate_zigzag(st, p, q, testgen::uniform_int(g, 1, 12), lo, hi);
      EXPECT_TRUE(z.defects(st).empty()) << z.defects(st).front().reason;
      EXPECT_NEAR(st.base().distance(z.end().x, q.x), 0.0, 1e-9);
      EXPECT_NEAR(z.end().t, q.t, 1e-9);
    } catch (const PreconditionError&) {
      // band too narrow for the teeth or endpoints too close: a documented refusal
    }
  }
}

TEST(Zigzag, RejectsBadBands) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  const auto p = SpacetimePoint::on_line(1, -1);
  const auto q = SpacetimePoint::on_line(1, 1);
  EXPECT_THROW(generate_zigzag(st, p, q, 0, 0, 1), PreconditionError);
  EXPECT_THROW(generate_zigzag(st, p, q, 2, 1.5, 1.0), PreconditionError);
  const auto lo = SpacetimePoint::on_line(0, -1);
  const auto hi = SpacetimePoint::on_line(0, 1);
  EXPECT_THROW(generate_zigzag(st, lo, hi, 10, 0, 0.01), PreconditionError);
  EXPECT_NO_THROW(generate_zigzag(st, lo, hi, 100, 0, 0.01));
}

TEST(FractalFamilies, TimelikeAndNullExact) {
  for (int i = 1; i <= 10; ++i) {
    const auto t2 = fractal_family("timelike_2", i);
    EXPECT_EQ(null_length(t2.curve, t2.tau), 2.0) << i;
    EXPECT_TRUE(t2.curve.defects(t2.spacetime).empty());
    const auto n5 = fractal_family("null_5", i);
    EXPECT_EQ(null_length(n5.curve, n5.tau), 5.0) << i;
    EXPECT_TRUE(n5.curve.defects(n5.spacetime).empty());
  }
}

TEST(FractalFamilies, SqrtMatchesClosedForm) {
  for (int i = 1; i <= 20; ++i) {
    const auto inst = fractal_family("sqrt_nonattained", i);
    const double oracle = sqrt_family_oracle(i);
    EXPECT_NEAR(null_length(inst.curve, inst.tau), oracle, 1e-12) << i;
    EXPECT_NEAR(fractal_expected_length("sqrt_nonattained", i), oracle, 1e-12) << i;
  }
  EXPECT_NEAR(sqrt_family_oracle(20), 1.0, 1e-3);
}

TEST(FractalFamilies, RemovedScenariosCarryExcisions) {
  for (const char* name : {"removed_point", "removed_line"}) {
    const auto inst = fractal_family(name, 3);
    EXPECT_FALSE(inst.excisions.empty()) << name;
    EXPECT_NEAR(null_length(inst.curve, inst.tau), inst.expected_length, 1e-12) << name;
  }
}

TEST(FractalFamilies, Errors) {
  EXPECT_THROW(fractal_family("no_such_family", 1), DomainError);
  EXPECT_THROW(fractal_family("timelike_2", 0), DomainError);
  EXPECT_THROW(fractal_family("timelike_2", kMaxFractalIndex + 1), DomainError);
  EXPECT_EQ(fractal_family_names().size(), 5u);
}

}  // namespace
}  // namespace nulldist

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "nulldist/errors.hpp"
#include "nulldist/spacetime.hpp"

namespace nulldist {
namespace {

WarpedSpacetime quadratic_strip() {
  return {0, 2, BaseManifold::interval(4), WarpingFunction::quadratic()};
}

TEST(CausalReach, Product) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  EXPECT_DOUBLE_EQ(causal_reach(st, 0, 2), 2.0);
  EXPECT_EQ(causal_reach(st, 1.3, 1.3), 0.0);
}

TEST(CausalReach, QuadraticIsArctan) {
  const auto st = quadratic_strip();
  EXPECT_NEAR(causal_reach(st, 0, 1), std::atan(1.0), 1e-12);
  EXPECT_NEAR(causal_reach(st, 0.5, 1.7), std::atan(1.7) - std::atan(0.5), 1e-12);
  EXPECT_EQ(causal_reach(st, 0.8, 0.8), 0.0);
}

TEST(CausalReach, SymmetricInEndpoints) {
  const auto st = quadratic_strip();
  EXPECT_DOUBLE_EQ(causal_reach(st, 1.5, 0.25), causal_reach(st, 0.25, 1.5));
}

TEST(CausalReach, PropertiesOnRandomWarpings) {
  testgen::Engine g(5);
  for (int rep = 0; rep < 60; ++rep) {
    const WarpingFunction w =
        rep % 2 == 0 ? testgen::smooth_warping(g) : testgen::kinked_warping(g, 0, 3);
    const WarpedSpacetime st(0, 3, BaseManifold::circle(4), w);
    double a = testgen::uniform(g, 0, 3);
    double c = testgen::uniform(g, 0, 3);
    if (a > c) std::swap(a, c);
    const double b = testgen::uniform(g, a, c);
    const double ac = st.causal_reach(a, c);
    EXPECT_NEAR(ac, st.causal_reach(a, b) + st.causal_reach(b, c), 1e-10) << w.label;
    EXPECT_GE(ac, (c - a) / st.f_max() - 1e-12);
    EXPECT_LE(ac, (c - a) / st.f_min() + 1e-12);
  }
}

TEST(TimeAfterReach, InvertsReach) {
  const auto st = quadratic_strip();
  const auto t = st.time_after_reach(0.2, 0.5);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(st.causal_reach(0.2, *t), 0.5, 1e-10);
  EXPECT_FALSE(st.time_after_reach(0.2, 10.0).has_value());
}

TEST(CausalOrderTest, ProductExample) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::interval(4));
  const auto p = SpacetimePoint::on_line(0, 0);
  const auto q = SpacetimePoint::on_line(2, 1);
  EXPECT_EQ(st.causal_order(p, q), CausalOrder::Before);
  EXPECT_EQ(st.causal_order(q, p), CausalOrder::After);
  EXPECT_TRUE(is_causally_related(st, p, q));
}

TEST(CausalOrderTest, QuadraticEndpointsUnrelated) {
  const auto st = quadratic_strip();
  const auto p = SpacetimePoint::on_line(0, -1);
  const auto q = SpacetimePoint::on_line(0, 1);
  EXPECT_EQ(st.causal_order(p, q), CausalOrder::None);
  EXPECT_FALSE(is_causally_related(st, p, q));
  EXPECT_GT(st.cone_excess(p, q), 0.0);
}

TEST(CausalOrderTest, Reflexive) {
  const auto st = quadratic_strip();
  const auto p = SpacetimePoint::on_line(1, 0.5);
  EXPECT_EQ(st.causal_order(p, p), CausalOrder::Before);
}

TEST(CausalOrderTest, Transitive) {
  testgen::Engine g(31);
  const auto st = quadratic_strip();
  int chains = 0;
  for (int rep = 0; rep < 4000 && chains < 100; ++rep) {
    const auto a = testgen::event_in(g, st);
    const auto b = testgen::event_in(g, st);
    const auto c = testgen::event_in(g, st);
    if (st.causally_precedes(a, b) && st.causally_precedes(b, c)) {
      ++chains;
      EXPECT_TRUE(st.causally_precedes(a, c));
    }
  }
  EXPECT_GT(chains, 10);
}

TEST(EvaluateTime, Examples) {
  const auto st = WarpedSpacetime::product(-1, 3, BaseManifold::interval(2));
  const auto x = BasePoint::line(0.25);
  EXPECT_EQ(evaluate_time(st, TimeFunction::canonical(), {1.5, x}), 1.5);
  EXPECT_EQ(evaluate_time(st, TimeFunction::cube(), {2, x}), 8.0);
  EXPECT_EQ(evaluate_time(st, TimeFunction::sqrt_jump(), {1, x}), 1.0);
  EXPECT_THROW(evaluate_time(st, TimeFunction::canonical(), {4, x}), DomainError);
}

TEST(TimeFunctions, Registry) {
  for (const auto& name : time_function_registry_names()) {
    EXPECT_NO_THROW(time_function_by_name(name)) << name;
  }
  EXPECT_ANY_THROW(time_function_by_name("no_such_tau"));
  EXPECT_EQ(TimeFunction::step()(0.0), 0.0);
  EXPECT_EQ(TimeFunction::step()(0.5), 1.5);
  EXPECT_EQ(TimeFunction::step()(-0.5), -1.5);
  EXPECT_FALSE(TimeFunction::step().continuous());
  EXPECT_NEAR(TimeFunction::sqrt_reshaped()(-4), -2.0, 1e-15);
}

TEST(TimeFunctions, MonotoneAlongCausalPairs) {
  testgen::Engine g(8);
  const auto st = quadratic_strip();
  const TimeFunction taus[] = {TimeFunction::canonical(), TimeFunction::cubic_shift(),
                               TimeFunction::cube()};
  for (int rep = 0; rep < 500; ++rep) {
    const auto p = testgen::event_in(g, st);
    const auto q = testgen::event_in(g, st);
    if (!st.causally_precedes(p, q) || p.t == q.t) continue;
    for (const auto& tf : taus) EXPECT_GT(tf(q.t), tf(p.t)) << tf.label();
  }
}

TEST(Conformal, NullSpeedIgnoresPsi) {
  const auto st = quadratic_strip();
  const auto scaled = st.rescaled({[](double t) { return 1 + t * t; }, "1+t^2"});
  for (double t : {0.0, 0.3, 1.1, 2.0}) {
    EXPECT_EQ(st.null_speed(t), scaled.null_speed(t));
    EXPECT_EQ(st.causal_reach(0, t), scaled.causal_reach(0, t));
  }
}

TEST(WarpingFunctions, DeclaredBoundsHold) {
  const WarpingFunction ws[] = {WarpingFunction::uniform_sine(4), WarpingFunction::band(0.5, 8),
                                WarpingFunction::band(2.0, 8), WarpingFunction::collapse(16)};
  for (const auto& w : ws) {
    const WarpedSpacetime st(0, 2, BaseManifold::circle(6), w);
    for (int i = 0; i <= 400; ++i) {
      const double t = 2.0 * i / 400;
      EXPECT_GE(w(t), st.f_min() - 1e-12) << w.label;
      EXPECT_LE(w(t), st.f_max() + 1e-12) << w.label;
    }
  }
}

TEST(WarpingFunctions, ExpressionAndErrors) {
  const auto w = WarpingFunction::expression("1 + t^2", std::nullopt, std::nullopt);
  EXPECT_DOUBLE_EQ(w(2), 5.0);
  EXPECT_THROW(WarpingFunction::expression("1 + ", std::nullopt, std::nullopt), ParseError);
  EXPECT_ANY_THROW(WarpedSpacetime(0, 1, BaseManifold::interval(1),
                                   WarpingFunction::expression("t - 0.5", std::nullopt,
                                                               std::nullopt)));
}

TEST(Smoothstep, Endpoints) {
  EXPECT_EQ(smoothstep(-1), 0.0);
  EXPECT_EQ(smoothstep(0), 0.0);
  EXPECT_EQ(smoothstep(1), 1.0);
  EXPECT_EQ(smoothstep(0.5), 0.5);
}

}  // namespace
}  // namespace nulldist

#include <gtest/gtest.h>

#include <cmath>

#include "fuzzmetrics/fixtures.hpp"
#include "fuzzmetrics/metrics.hpp"
#include "oracles.hpp"

using namespace fuzzmetrics;
namespace fx = fuzzmetrics::fixtures;

namespace {

constexpr auto SUM = ProductMetricKind::sum;
constexpr auto MAX = ProductMetricKind::max;

StepFuzzySet origin() { return singleton(GroundPoint::line(0.0)); }

// A two-component cut forces the certified path against a linear fuzzy number.
StepFuzzySet split_step() {
  return make_step({{0.5, GroundSet::intervals({{0, 0.2}, {0.4, 0.5}})}, {1.0, GroundSet::interval(0, 0.2)}});
}

}  // namespace

TEST(Dp, ContinuousCutExample) {
  const auto e = fx::ecn();
  for (double p : {1.0, 2.0, 3.0}) {
    const auto r = d_p(e.u, e.v, p);
    EXPECT_TRUE(r.exact);
    EXPECT_NEAR(r.v(), std::pow(std::pow(0.5, p + 1) / (p + 1), 1 / p), 1e-12) << p;
  }
  EXPECT_NEAR(d_p(e.u, e.v, 1).v(), 0.125, 1e-15);
  EXPECT_NEAR(h_end(e.u, e.v, SUM).v(), 0.5, 1e-12);
  EXPECT_NEAR(d_infty(e.u, e.v).v(), 0.5, 1e-15);
}

TEST(Dp, StepExample) {
  const auto e = fx::eym();
  for (double p : {1.0, 2.0, 3.0}) EXPECT_NEAR(d_p(e.u, e.v, p).v(), std::pow(0.5, 1 + 1 / p), 1e-12) << p;
  EXPECT_NEAR(d_p(e.u, e.v, 2).v(), 0.353553, 1e-6);
  EXPECT_EQ(d_infty(e.u, e.v).v(), 0.5);
  EXPECT_EQ(h_end(e.u, e.v, MAX).v(), 0.5);
  EXPECT_EQ(h_send(e.u, e.v, SUM).v(), 0.5);
}

TEST(Dp, TrivialCases) {
  const FuzzySet box = characteristic(GroundSet::interval(0, 1));
  const FuzzySet o = origin();
  EXPECT_EQ(d_infty(box, o).v(), 1.0);
  EXPECT_EQ(d_p(box, box, 2).v(), 0.0);
  EXPECT_EQ(h_end(box, box, SUM).v(), 0.0);
  EXPECT_EQ(h_send(box, box, MAX).v(), 0.0);
  const FuzzySet x = singleton(GroundPoint::line(0.2)), y = singleton(GroundPoint::line(1.7));
  EXPECT_NEAR(h_send(x, y, SUM).v(), 1.5, 1e-15);
  EXPECT_NEAR(h_send(x, y, MAX).v(), 1.5, 1e-15);
}

TEST(Dp, Errors) {
  const FuzzySet a = origin();
  const FuzzySet b = singleton(GroundPoint::euclidean({0, 0}));
  EXPECT_THROW(d_p(a, a, 0.5), domain_error);
  EXPECT_THROW(d_p(a, b, 1), usage_error);
  EXPECT_THROW(d_infty(a, b), usage_error);
  EXPECT_THROW(h_end(a, b, SUM), usage_error);
}

// |I - I_N| ≤ Σ_b |jump of H^p at b| · h/2 for a midpoint rule on a step function.
TEST(Dp, MidpointOracleOnRandomSteps) {
  fx::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const FuzzySet u = fx::random_line_step(rng), v = fx::random_line_step(rng);
    const double p = 1.0 + i % 3;
    const double exact = std::pow(d_p(u, v, p).v(), p);
    const long n = 4096 + 7;
    const double approx = std::pow(oracle::riemann_dp(u, v, p, n), p);
    auto grid = breakpoints(u);
    const auto gv = breakpoints(v);
    grid.insert(grid.end(), gv.begin(), gv.end());
    const double hmax = d_infty(u, v).v();
    ASSERT_LE(std::abs(exact - approx), grid.size() * std::pow(hmax, p) / (2.0 * n) + 1e-12);
  }
}

TEST(Dinf, DominatesDpAndDpIncreasesInP) {
  fx::Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const FuzzySet u = fx::random_line_step(rng), v = fx::random_line_step(rng);
    const double d1 = d_p(u, v, 1).v(), d2 = d_p(u, v, 2).v(), d3 = d_p(u, v, 3).v();
    ASSERT_LE(d1, d2 + 1e-12);
    ASSERT_LE(d2, d3 + 1e-12);
    ASSERT_LE(d3, d_infty(u, v).v() + 1e-12);
  }
}

TEST(Hend, GridOracleOnRandomLineSteps) {
  fx::Rng rng(41);
  for (int i = 0; i < 40; ++i) {
    const auto u = fx::random_line_step(rng), v = fx::random_line_step(rng);
    for (auto kind : {SUM, MAX}) {
      const double exact = h_end(u, v, kind).v();
      const double grid = oracle::step_end_grid(u, v, kind, 1e-3);
      ASSERT_GE(exact + 1e-12, grid);
      ASSERT_LE(exact - grid, 1e-3);
      ASSERT_LE(exact, 1.0);
    }
  }
}

TEST(Hend, GridOracleOnLinearExample) {
  const auto e = fx::ecn();
  const auto& u = std::get<LinearFuzzyNumber>(e.u);
  const auto& v = std::get<LinearFuzzyNumber>(e.v);
  for (auto kind : {SUM, MAX}) {
    const double exact = h_end(e.u, e.v, kind).v();
    const double grid = oracle::linear_end_grid(u, v, kind, 1e-3, 1e-3);
    EXPECT_GE(exact + 1e-12, grid);
    EXPECT_LE(exact - grid, 3e-3);
  }
}

TEST(Hsend, SandwichedOnRandomPairs) {
  fx::Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const FuzzySet u = fx::random_line_step(rng), v = fx::random_line_step(rng);
    const double hs = h_send(u, v, SUM).v(), he = h_end(u, v, SUM).v();
    ASSERT_LE(he, hs + 1e-12);
    ASSERT_LE(hs, d_infty(u, v).v() + 1e-12);
  }
}

// Step against linear goes through the certified path; compare with a fine midpoint rule.
TEST(Certified, MixedPairWithinBound) {
  const auto e = fx::ecn();
  const FuzzySet step = split_step();
  const auto r = d_p(step, e.u, 2);
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.error_bound, 1e-6);
  EXPECT_NEAR(r.v(), oracle::riemann_dp(step, e.u, 2, 200000), 1e-5);
  // Endpoint slopes of v vanish, so its bracket collapses to an exact value.
  EXPECT_TRUE(d_p(step, e.v, 2).exact);
  const auto s = d_infty(step, e.u, 1e-8);
  EXPECT_LE(s.error_bound, 1e-8);
  double sampled = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    const double a = k / 100000.0;
    sampled = std::max(sampled, hausdorff(cut(step, a), cut(e.u, a)).value());
  }
  EXPECT_GE(s.v() + s.error_bound, sampled);
  EXPECT_NEAR(s.v(), sampled, 1e-5);
}

TEST(Certified, UnreachableToleranceReportsBestBound) {
  const FuzzySet step = split_step();
  const FuzzySet lin = LinearFuzzyNumber::make({{0, -1, 2}, {0.3, 0, 1.5}, {1, 0.2, 0.4}});
  try {
    d_p(step, lin, 1.5, 1e-300);
    FAIL() << "expected tolerance_error";
  } catch (const tolerance_error& err) {
    EXPECT_GT(err.best_bound(), 0.0);
  }
}

TEST(Audit, WorkedExampleEqualityCases) {
  const auto ecn = fx::ecn();
  const auto eym = fx::eym();
  for (double p : {1.0, 2.0, 3.0}) {
    const auto a = inequality_audit(ecn.u, ecn.v, p);
    EXPECT_TRUE(a.all_pass());
    const auto dpe = std::find_if(a.entries.begin(), a.entries.end(), [](auto& e) { return e.name == "dp_ge_hend_bound"; });
    EXPECT_TRUE(dpe->equality_case) << p;
    const auto b = inequality_audit(eym.u, eym.v, p);
    EXPECT_TRUE(b.all_pass());
    const auto dperym =
        std::find_if(b.entries.begin(), b.entries.end(), [](auto& e) { return e.name == "dp_ge_hendmax_bound"; });
    EXPECT_TRUE(dperym->equality_case) << p;
  }
  const auto self = inequality_audit(eym.u, eym.u, 2);
  EXPECT_TRUE(self.all_pass());
  for (const auto& e : self.entries) EXPECT_EQ(e.lhs, 0.0) << e.name;
  EXPECT_EQ(self.tight_bounds(), 0u);
}

TEST(Audit, RandomPairsPass) {
  fx::Rng rng(77);
  const auto m = fx::random_matrix_space(rng, 6);
  for (int i = 0; i < 200; ++i) {
    const FuzzySet u = i % 2 ? fx::random_euclidean_step(rng) : fx::random_matrix_step(rng, m);
    const FuzzySet v = i % 2 ? fx::random_euclidean_step(rng) : fx::random_matrix_step(rng, m);
    const auto a = inequality_audit(u, v, 1.0 + i % 2);
    for (const auto& e : a.entries) ASSERT_TRUE(e.pass) << e.name << " " << e.lhs << " " << e.rhs;
  }
}

TEST(MetricAxioms, TriangleOnLineSteps) {
  fx::Rng rng(19);
  for (int i = 0; i < 300; ++i) {
    const FuzzySet u = fx::random_line_step(rng), v = fx::random_line_step(rng), w = fx::random_line_step(rng);
    auto check = [&](auto&& f) { ASSERT_LE(f(u, w), f(u, v) + f(v, w) + 1e-9); };
    check([](auto& a, auto& b) { return d_p(a, b, 1.5).v(); });
    check([](auto& a, auto& b) { return d_infty(a, b).v(); });
    check([](auto& a, auto& b) { return h_end(a, b, SUM).v(); });
    check([](auto& a, auto& b) { return h_end(a, b, MAX).v(); });
    check([](auto& a, auto& b) { return h_send(a, b, SUM).v(); });
    ASSERT_EQ(h_end(u, v, SUM).v(), h_end(v, u, SUM).v());
  }
}

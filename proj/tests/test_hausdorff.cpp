#include <gtest/gtest.h>

#include <cmath>

#include "fuzzmetrics/fixtures.hpp"
#include "fuzzmetrics/hausdorff.hpp"

using namespace fuzzmetrics;
namespace fx = fuzzmetrics::fixtures;

namespace {

// sup over a uniform grid of A of the (exact) point-to-set distance.
double grid_pre(const GroundSet& a, const GroundSet& b, double step) {
  double m = 0.0;
  for (const auto& iv : a.intervals()) {
    const long n = static_cast<long>(std::ceil((iv.hi - iv.lo) / step));
    for (long k = 0; k <= n; ++k) {
      const double x = std::min(iv.hi, iv.lo + k * step);
      m = std::max(m, dist_to_set(GroundPoint::line(x), b).value());
    }
  }
  return m;
}

double brute_envelope_sup(const std::vector<Interval>& dom, const std::vector<WeightedInterval>& t) {
  double m = -1.0;
  for (const auto& d : dom)
    for (int k = 0; k <= 4000; ++k) m = std::max(m, detail::envelope_at(d.lo + (d.hi - d.lo) * k / 4000.0, t));
  return m;
}

}  // namespace

TEST(HausdorffPre, Examples) {
  const auto split = GroundSet::intervals({{0, 1}, {3, 4}});
  EXPECT_EQ(hausdorff_pre(split, GroundSet::interval(0, 4)).value(), 0.0);
  EXPECT_EQ(hausdorff_pre(GroundSet::interval(0, 4), split).value(), 1.0);
  const auto b = GroundSet::intervals({{-1, 0}, {4, 5}});
  EXPECT_EQ(hausdorff_pre(GroundSet::interval(1.5, 1.5), b).value(), dist_to_set(GroundPoint::line(1.5), b).value());
}

TEST(Hausdorff, Examples) {
  EXPECT_EQ(hausdorff(GroundSet::interval(0, 1), GroundSet::interval(0, 3)).value(), 2.0);
  EXPECT_EQ(hausdorff(GroundSet::interval(0, 4), GroundSet::intervals({{0, 1}, {3, 4}})).value(), 1.0);
  EXPECT_EQ(hausdorff(GroundSet::interval(0, 2), GroundSet::interval(0, 0)).value(), 2.0);
  EXPECT_THROW(hausdorff(GroundSet::interval(0, 1), GroundSet::points(1, {{0}})), usage_error);
}

TEST(HausdorffExt, EmptySet) {
  EXPECT_EQ(hausdorff_ext(std::nullopt, std::nullopt).value(), 0.0);
  EXPECT_FALSE(hausdorff_ext(std::nullopt, GroundSet::interval(0, 1)).is_finite());
  EXPECT_FALSE(hausdorff_ext(GroundSet::interval(0, 1), std::nullopt).is_finite());
  EXPECT_EQ(hausdorff_ext(GroundSet::interval(0, 1), GroundSet::interval(0, 1)).value(), 0.0);
}

TEST(HausdorffProduct, Examples) {
  const std::vector<GroundSet> as{GroundSet::interval(0, 1), GroundSet::interval(0, 0)};
  const std::vector<GroundSet> bs{GroundSet::interval(0, 3), GroundSet::interval(5, 5)};
  EXPECT_EQ(hausdorff_product(as, bs).value(), 5.0);
  EXPECT_EQ(hausdorff_product(as, as).value(), 0.0);
  EXPECT_EQ(hausdorff_product({as[0]}, {bs[0]}).value(), hausdorff(as[0], bs[0]).value());
  EXPECT_THROW(hausdorff_product(as, {bs[0]}), usage_error);
  // The same value through product sets.
  EXPECT_EQ(hausdorff(GroundSet::product(as), GroundSet::product(bs)).value(), 5.0);
}

// Candidate enumeration vs a 1e-4 grid: never below the grid, never more than one step above.
TEST(HausdorffPre, GridOracleOnLine) {
  fx::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto a = fx::random_intervals(rng, 3, -2, 2);
    const auto b = fx::random_intervals(rng, 3, -2, 2);
    const double exact = hausdorff_pre(a, b).value();
    const double grid = grid_pre(a, b, 1e-4);
    ASSERT_GE(exact + 1e-12, grid);
    ASSERT_LE(exact - grid, 1e-4);
  }
}

TEST(WeightedEnvelope, MatchesDenseSampling) {
  fx::Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    std::vector<WeightedInterval> t;
    const int k = fx::uniform_int(rng, 1, 4);
    for (int j = 0; j < k; ++j) {
      const double lo = fx::uniform(rng, -3, 3);
      t.push_back({lo, lo + fx::uniform(rng, 0, 1), fx::uniform(rng, 0, 1)});
    }
    const auto dom = fx::random_intervals(rng, 2, -3, 3).intervals();
    const double exact = sup_weighted_envelope(dom, t);
    const double sampled = brute_envelope_sup(dom, t);
    ASSERT_GE(exact + 1e-12, sampled);
    ASSERT_LE(exact - sampled, 6.0 / 4000.0 + 1e-12);
  }
}

TEST(Hausdorff, TriangleAndMonotonicityRandom) {
  fx::Rng rng(21);
  const auto m = fx::random_matrix_space(rng, 8);
  for (int backend = 0; backend < 3; ++backend) {
    for (int i = 0; i < 10000; ++i) {
      auto draw = [&] {
        if (backend == 0) return fx::random_intervals(rng, 3, -2, 2);
        if (backend == 1) return fx::random_points(rng, 2, 4, 2.0);
        return fx::random_indices(rng, m, 4);
      };
      const auto a = draw(), b = draw(), c = draw();
      ASSERT_LE(hausdorff_pre(a, c).value(), hausdorff_pre(a, b).value() + hausdorff_pre(b, c).value() + 1e-9);
      ASSERT_LE(hausdorff(a, c).value(), hausdorff(a, b).value() + hausdorff(b, c).value() + 1e-9);
      ASSERT_EQ(hausdorff(a, b).value(), hausdorff(b, a).value());
      // Enlarging the target never increases the pre-distance.
      ASSERT_LE(hausdorff_pre(a, set_union(b, c)).value(), hausdorff_pre(a, b).value());
    }
  }
}

TEST(Hausdorff, ZeroIffEqualOnCanonicalForms) {
  fx::Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto a = fx::random_intervals(rng, 2, 0, 1);
    const auto b = fx::random_intervals(rng, 2, 0, 1);
    EXPECT_EQ(hausdorff(a, b).value() == 0.0, a == b);
  }
}

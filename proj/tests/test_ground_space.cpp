#include <gtest/gtest.h>

#include <random>

#include "fuzzmetrics/fixtures.hpp"
#include "fuzzmetrics/ground_space.hpp"

using namespace fuzzmetrics;

namespace {

MatrixSpacePtr seven() { return MatrixSpace::make({{0, 7, 4}, {7, 0, 5}, {4, 5, 0}}); }

}  // namespace

TEST(Dist, BackendExamples) {
  EXPECT_EQ(dist(GroundPoint::line(2), GroundPoint::line(5)).value(), 3.0);
  EXPECT_EQ(dist(GroundPoint::euclidean({0, 0}), GroundPoint::euclidean({3, 4})).value(), 5.0);
  const auto m = seven();
  EXPECT_EQ(dist(GroundPoint::matrix(m, 0), GroundPoint::matrix(m, 1)).value(), 7.0);
}

TEST(Dist, MismatchIsUsageError) {
  EXPECT_THROW(dist(GroundPoint::line(0), GroundPoint::euclidean({0})), usage_error);
  EXPECT_THROW(dist(GroundPoint::euclidean({0, 0}), GroundPoint::euclidean({0, 0, 0})), usage_error);
  const auto a = seven();
  const auto b = MatrixSpace::make({{0, 1}, {1, 0}});
  EXPECT_THROW(dist(GroundPoint::matrix(a, 0), GroundPoint::matrix(b, 0)), usage_error);
}

TEST(DistToSet, Examples) {
  const auto a = GroundSet::intervals({{0, 1}, {3, 4}});
  EXPECT_EQ(dist_to_set(GroundPoint::line(2), a).value(), 1.0);
  EXPECT_EQ(dist_to_set(GroundPoint::line(0.5), GroundSet::interval(0, 1)).value(), 0.0);
  EXPECT_EQ(dist_to_set(GroundPoint::euclidean({0, 0}), GroundSet::points(2, {{3, 4}, {6, 8}})).value(), 5.0);
}

TEST(ProductDist, Examples) {
  using P = GroundPoint;
  const Space line{};
  Space plane;
  plane.backend = Backend::euclidean;
  plane.dim = 2;
  EXPECT_EQ(product_dist({P::line(0), P::line(0)}, {P::line(2), P::line(5)}, {line, line}).value(), 5.0);
  EXPECT_EQ(product_dist({P::line(1), P::line(2)}, {P::line(1), P::line(2)}, {line, line}).value(), 0.0);
  EXPECT_EQ(product_dist({P::line(1), P::euclidean({0, 0})}, {P::line(1), P::euclidean({3, 4})}, {line, plane}).value(),
            5.0);
  EXPECT_THROW(product_dist({P::line(1)}, {P::line(1), P::line(2)}, {line, line}), usage_error);
  EXPECT_EQ(dist(P::product({P::line(0), P::euclidean({0, 0})}), P::product({P::line(2), P::euclidean({3, 4})})).value(),
            5.0);
}

TEST(Canonical, MergesTouchingAndIsIdempotent) {
  const auto a = closure_of_interval_list({{0, 1}, {1, 2}});
  ASSERT_EQ(a.intervals().size(), 1u);
  EXPECT_EQ(a.intervals()[0].lo, 0.0);
  EXPECT_EQ(a.intervals()[0].hi, 2.0);
  const auto b = closure_of_interval_list({{5, 6}, {0, 1}, {0.5, 2}, {3, 3}});
  EXPECT_EQ(closure_of_interval_list(b.intervals()), b);
  EXPECT_EQ(b.intervals().size(), 3u);
  EXPECT_THROW(closure_of_interval_list({}), domain_error);
  EXPECT_THROW(closure_of_interval_list({{2, 1}}), domain_error);
}

TEST(Diameter, UnionExamples) {
  EXPECT_EQ(diameter(GroundSet::intervals({{0, 1}, {3, 4}})).value(), 4.0);
  const auto u = set_union(GroundSet::interval(0, 1), GroundSet::interval(2, 3));
  EXPECT_EQ(u, GroundSet::intervals({{0, 1}, {2, 3}}));
  EXPECT_EQ(diameter(GroundSet::points(2, {{0, 0}, {3, 4}, {1, 1}})).value(), 5.0);
  EXPECT_EQ(diameter(GroundSet::matrix(seven(), {0, 1, 2})).value(), 7.0);
}

TEST(Matrix, ValidatesDistanceTable) {
  EXPECT_THROW(MatrixSpace::make({{0, 1}, {2, 0}}), construction_error);
  EXPECT_THROW(MatrixSpace::make({{1, 1}, {1, 0}}), construction_error);
  EXPECT_THROW(MatrixSpace::make({{0, 1, 2}, {1, 0}}), construction_error);
  EXPECT_THROW(MatrixSpace::make({{0, -1}, {-1, 0}}), construction_error);
  EXPECT_THROW(GroundPoint::matrix(seven(), 3), construction_error);
}

TEST(GroundSetInvariants, SortedDedupedAndSubset) {
  const auto p = GroundSet::points(1, {{2}, {1}, {2}});
  EXPECT_EQ(p.points().size(), 2u);
  EXPECT_TRUE(is_subset(GroundSet::interval(1, 2), GroundSet::intervals({{0, 3}, {5, 6}})));
  EXPECT_FALSE(is_subset(GroundSet::interval(1, 4), GroundSet::intervals({{0, 3}, {5, 6}})));
  EXPECT_THROW(set_union(GroundSet::product({GroundSet::interval(0, 1)}), GroundSet::product({GroundSet::interval(2, 3)})),
               domain_error);
}

// dist_to_set vanishes exactly on members; checked against the membership predicate.
TEST(DistToSet, ZeroIffMember) {
  fixtures::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = fixtures::random_intervals(rng, 3, -2, 2);
    const auto x = GroundPoint::line(fixtures::uniform(rng, -3, 3));
    EXPECT_EQ(dist_to_set(x, a).value() == 0.0, contains(a, x));
  }
}

// Metric axioms on random triples per backend.
TEST(Dist, MetricAxiomsRandomTriples) {
  fixtures::Rng rng(5);
  const auto m = fixtures::random_matrix_space(rng, 8);
  auto point = [&](int backend) {
    switch (backend) {
      case 0: return GroundPoint::line(fixtures::uniform(rng, -5, 5));
      case 1: return GroundPoint::euclidean({fixtures::uniform(rng, -5, 5), fixtures::uniform(rng, -5, 5)});
      case 2: return GroundPoint::matrix(m, static_cast<std::size_t>(fixtures::uniform_int(rng, 0, 7)));
      default:
        return GroundPoint::product({GroundPoint::line(fixtures::uniform(rng, -5, 5)),
                                     GroundPoint::matrix(m, static_cast<std::size_t>(fixtures::uniform_int(rng, 0, 7)))});
    }
  };
  for (int b = 0; b < 4; ++b) {
    for (int i = 0; i < 10000; ++i) {
      const auto x = point(b), y = point(b), z = point(b);
      const double xy = dist(x, y).value(), yz = dist(y, z).value(), xz = dist(x, z).value();
      ASSERT_GE(xy, 0.0);
      ASSERT_EQ(xy, dist(y, x).value());
      ASSERT_EQ(dist(x, x).value(), 0.0);
      ASSERT_LE(xz, xy + yz + 1e-9);
    }
  }
}

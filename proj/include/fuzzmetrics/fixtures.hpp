#pragma once

// Named constructions and seeded random generators. Everything is built in
// code so the provenance of each fixture can be read off its definition.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fuzzmetrics/diagnostics.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/fuzzy.hpp"
#include "fuzzmetrics/ground_space.hpp"

namespace fuzzmetrics::fixtures {

struct NamedPair {
  std::string name;
  FuzzySet u;
  FuzzySet v;
};

/// u has cuts [0, 0.5-α] up to 0.5 and {0} above; v keeps [0,0.5] up to 0.5 and drops
/// to {0} above. d_p = (0.5^{p+1}/(p+1))^{1/p}, H_end = 0.5.
inline NamedPair ecn() {
  auto u = LinearFuzzyNumber::make({{0.0, 0.0, 0.5}, {0.5, 0.0, 0.0}, {1.0, 0.0, 0.0}});
  auto v = LinearFuzzyNumber::make({{0.0, 0.0, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.0, 0.0}, {1.0, 0.0, 0.0}});
  return {"ecn", u, v};
}

/// Same lower cut [0,0.5]; the 1-cuts are {0} and {0.5}. d_p = 0.5^{1+1/p}, H'_end = 0.5.
inline NamedPair eym() {
  auto u = make_step({{0.5, GroundSet::interval(0.0, 0.5)}, {1.0, GroundSet::interval(0.0, 0.0)}});
  auto v = make_step({{0.5, GroundSet::interval(0.0, 0.5)}, {1.0, GroundSet::interval(0.5, 0.5)}});
  return {"eym", u, v};
}

/// Distance 0.3 rather than 1 so no endograph bound is tight by accident.
inline NamedPair singletons() {
  return {"singletons", singleton(GroundPoint::line(0.0)), singleton(GroundPoint::line(0.3))};
}

/// Products of a planar point cloud and a four-point matrix space.
inline NamedPair products() {
  auto m = MatrixSpace::make({{0, 1, 2, 2.5}, {1, 0, 1.5, 2}, {2, 1.5, 0, 1}, {2.5, 2, 1, 0}});
  auto e1 = make_step({{0.4, GroundSet::points(2, {{0, 0}, {1, 0}, {0, 1}})}, {1.0, GroundSet::points(2, {{0, 0}})}});
  auto e2 = make_step({{0.7, GroundSet::points(2, {{0.5, 0}, {1, 1}})}, {1.0, GroundSet::points(2, {{1, 1}})}});
  auto m1 = make_step({{0.3, GroundSet::matrix(m, {0, 1, 2})}, {1.0, GroundSet::matrix(m, {1})}});
  auto m2 = make_step({{0.6, GroundSet::matrix(m, {2, 3})}, {1.0, GroundSet::matrix(m, {3})}});
  return {"products", product_fuzzy({e1, m1}), product_fuzzy({e2, m2})};
}

inline std::vector<NamedPair> pack() { return {ecn(), eym(), singletons(), products()}; }

/// u_K: [-n,n] on (1/(n+1), 1/n] for n < K and [-K,K] on (0, 1/K].
inline StepFuzzySet pefium(int k) {
  if (k < 1) throw domain_error("pefium: K must be >= 1");
  std::vector<Level> levels;
  for (int n = k; n >= 1; --n) {
    levels.push_back({1.0 / n, GroundSet::interval(-n, n)});
  }
  return make_step(std::move(levels));
}

/// Σ_{n<K} n(1/n − 1/(n+1)) + 1, the distance d_1(u_K, 0^).
inline double pefium_d1(int k) {
  double s = 1.0;
  for (int n = 1; n < k; ++n) s += n * (1.0 / n - 1.0 / (n + 1));
  return s;
}

inline Family pefium_family(int k_max) {
  std::vector<FuzzySet> ms;
  Generator g{"pefium", {}, Refinement::extend};
  for (int k = 1; k <= k_max; ++k) {
    ms.emplace_back(pefium(k));
    g.indices.push_back(k);
  }
  return Family::make(std::move(ms), std::move(g));
}

/// W_n: [0,1] on (1/n, 1], [0,n] on (0, 1/n].
inline StepFuzzySet w_member(int n) {
  if (n < 1) throw domain_error("W: n must be >= 1");
  if (n == 1) return characteristic(GroundSet::interval(0.0, 1.0));
  return make_step({{1.0 / n, GroundSet::interval(0.0, n)}, {1.0, GroundSet::interval(0.0, 1.0)}});
}

inline Family w_family(int n_max) {
  std::vector<FuzzySet> ms;
  Generator g{"W", {}, Refinement::extend};
  for (int n = 1; n <= n_max; ++n) {
    ms.emplace_back(w_member(n));
    g.indices.push_back(n);
  }
  return Family::make(std::move(ms), std::move(g));
}

/// u_t: [0,1] on (t,1], [0,2] on (0,t]; a jump at t ≥ 1 leaves χ_[0,2].
inline StepFuzzySet ut_member(double t) {
  if (!(t > 0.0)) throw domain_error("u_t: t must be positive");
  if (t >= 1.0) return characteristic(GroundSet::interval(0.0, 2.0));
  return make_step({{t, GroundSet::interval(0.0, 2.0)}, {1.0, GroundSet::interval(0.0, 1.0)}});
}

/// t = step, 2·step, ... below 1.
inline Family ut_family(double step = 0.01) {
  if (!(step > 0.0 && step < 0.5)) throw domain_error("u_t family: step must lie in (0,0.5)");
  std::vector<FuzzySet> ms;
  Generator g{"u_t", {}, Refinement::densify};
  const int count = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int k = 1; k < count; ++k) {
    const double t = k * step;
    ms.emplace_back(ut_member(t));
    g.indices.push_back(t);
  }
  return Family::make(std::move(ms), std::move(g));
}

struct Sequence {
  std::string name;
  Family seq;
  FuzzySet limit;
};

/// u_n jumps at 0.5 + 1/n (n = 2..N), u at 0.5.
inline Sequence shrinking_jump(int n_max) {
  if (n_max < 2) throw domain_error("shrinking-jump: N must be >= 2");
  std::vector<FuzzySet> ms;
  Generator g{"shrinking-jump", {}, Refinement::extend};
  for (int n = 2; n <= n_max; ++n) {
    ms.emplace_back(ut_member(0.5 + 1.0 / n));
    g.indices.push_back(n);
  }
  return {"shrinking-jump", Family::make(std::move(ms), std::move(g)), ut_member(0.5)};
}

/// u_n = χ_[0, 1+1/n] → χ_[0,1].
inline Sequence uniform_shrink(int n_max) {
  if (n_max < 1) throw domain_error("uniform-shrink: N must be >= 1");
  std::vector<FuzzySet> ms;
  Generator g{"uniform-shrink", {}, Refinement::extend};
  for (int n = 1; n <= n_max; ++n) {
    ms.emplace_back(characteristic(GroundSet::interval(0.0, 1.0 + 1.0 / n)));
    g.indices.push_back(n);
  }
  return {"uniform-shrink", Family::make(std::move(ms), std::move(g)), characteristic(GroundSet::interval(0.0, 1.0))};
}

// ---------------------------------------------------------------------------------------
// Random generators

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Distinct sorted levels in (0,1), closed by 1. Rounded to 1/64 so profiles share grids often.
inline std::vector<double> random_alphas(Rng& rng, int max_levels = 4) {
  const int k = uniform_int(rng, 1, max_levels);
  std::vector<double> a;
  for (int i = 0; i + 1 < k; ++i) a.push_back(uniform_int(rng, 1, 63) / 64.0);
  a.push_back(1.0);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

/// Builds nested cuts from the top level down: each lower cut adds material to the one above.
template <typename Grow>
StepFuzzySet nested_step(Rng& rng, GroundSet top, Grow&& grow, int max_levels = 4) {
  const auto alphas = random_alphas(rng, max_levels);
  std::vector<Level> levels(alphas.size(), Level{1.0, top});
  GroundSet cur = std::move(top);
  for (std::size_t i = alphas.size(); i-- > 0;) {
    if (i + 1 < alphas.size()) cur = grow(cur);
    levels[i] = {alphas[i], cur};
  }
  return make_step(std::move(levels));
}

inline GroundSet random_intervals(Rng& rng, int max_parts, double lo, double hi) {
  const int k = uniform_int(rng, 1, max_parts);
  std::vector<Interval> iv;
  for (int i = 0; i < k; ++i) {
    const double a = uniform(rng, lo, hi);
    const double w = uniform_int(rng, 0, 3) == 0 ? 0.0 : uniform(rng, 0.0, 0.3 * (hi - lo));
    iv.push_back({a, a + w});
  }
  return GroundSet::intervals(std::move(iv));
}

inline StepFuzzySet random_line_step(Rng& rng) {
  return nested_step(rng, random_intervals(rng, 2, -2.0, 2.0),
                     [&](const GroundSet& c) { return set_union(c, random_intervals(rng, 2, -3.0, 3.0)); });
}

inline GroundSet random_points(Rng& rng, std::size_t dim, int max_points, double scale) {
  const int k = uniform_int(rng, 1, max_points);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < k; ++i) {
    std::vector<double> p;
    for (std::size_t d = 0; d < dim; ++d) p.push_back(uniform(rng, -scale, scale));
    pts.push_back(std::move(p));
  }
  return GroundSet::points(dim, std::move(pts));
}

inline StepFuzzySet random_euclidean_step(Rng& rng, std::size_t dim = 2) {
  return nested_step(rng, random_points(rng, dim, 3, 2.0),
                     [&](const GroundSet& c) { return set_union(c, random_points(rng, dim, 2, 3.0)); });
}

/// A finite metric space: distances of random planar points (distinct with probability 1).
inline MatrixSpacePtr random_matrix_space(Rng& rng, std::size_t n = 6) {
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({uniform(rng, 0.0, 3.0), uniform(rng, 0.0, 3.0)});
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = i == j ? 0.0 : std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
  return MatrixSpace::make(std::move(d));
}

inline GroundSet random_indices(Rng& rng, const MatrixSpacePtr& m, int max_points) {
  const int k = uniform_int(rng, 1, max_points);
  std::vector<std::size_t> idx;
  for (int i = 0; i < k; ++i) idx.push_back(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(m->size()) - 1)));
  return GroundSet::matrix(m, std::move(idx));
}

inline StepFuzzySet random_matrix_step(Rng& rng, const MatrixSpacePtr& m) {
  return nested_step(rng, random_indices(rng, m, 2),
                     [&](const GroundSet& c) { return set_union(c, random_indices(rng, m, 2)); });
}

/// A product of a Euclidean factor and a matrix factor, both finite so endographs are computable.
inline StepFuzzySet random_product_step(Rng& rng, const MatrixSpacePtr& m, std::size_t dim = 1) {
  return product_fuzzy({random_euclidean_step(rng, dim), random_matrix_step(rng, m)});
}

/// A random (continuous or jumping) fuzzy number on the line.
inline LinearFuzzyNumber random_linear(Rng& rng) {
  auto alphas = random_alphas(rng, 4);
  alphas.insert(alphas.begin(), 0.0);
  double a = uniform(rng, -2.0, 0.0), b = uniform(rng, 0.0, 2.0);
  std::vector<Knot> knots{{0.0, a, b}};
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    a += uniform(rng, 0.0, 0.5);
    b -= uniform(rng, 0.0, 0.5);
    if (a > b) a = b = 0.5 * (a + b);
    knots.push_back({alphas[i], a, b});
    if (i + 1 < alphas.size() && uniform_int(rng, 0, 2) == 0) {
      a += uniform(rng, 0.0, 0.3);
      b -= uniform(rng, 0.0, 0.3);
      if (a > b) a = b = 0.5 * (a + b);
      knots.push_back({alphas[i], a, b});
    }
  }
  return LinearFuzzyNumber::make(std::move(knots));
}

}  // namespace fuzzmetrics::fixtures

#pragma once

// Level-set representations of normal fuzzy sets with compact cuts.
//
// Cut convention: a StepFuzzySet with breakpoints 0 = γ_0 < γ_1 < ... < γ_k = 1 has
// cut(α) = C_i for α ∈ (γ_{i-1}, γ_i] and cut(0) = C_1. Cuts are therefore
// left-continuous in α and [u]_α = ∩_{β<α} [u]_β holds for every represented set.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fuzzmetrics/config.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ground_space.hpp"

namespace fuzzmetrics {

struct Level {
  double alpha;
  GroundSet set;
  friend bool operator==(const Level&, const Level&) = default;
};

inline void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw domain_error("alpha must lie in [0,1], got " + std::to_string(alpha));
}

class StepFuzzySet {
 public:
  /// Validates and canonicalizes: breakpoints strictly increasing in (0,1] ending at 1,
  /// one space, nested cuts; equal adjacent cuts are merged.
  static StepFuzzySet make(std::vector<Level> levels) {
    if (levels.empty()) throw construction_error("step fuzzy set needs at least one level");
    const Space space = levels.front().set.space();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double a = levels[i].alpha;
      if (!(a > 0.0 && a <= 1.0)) {
        throw construction_error("level " + std::to_string(i) + ": alpha " + std::to_string(a) + " not in (0,1]");
      }
      if (i > 0 && !(a > levels[i - 1].alpha)) {
        throw construction_error("level " + std::to_string(i) + ": alphas must be strictly increasing");
      }
      if (!(levels[i].set.space() == space)) {
        throw construction_error("level " + std::to_string(i) + ": backend differs from level 0");
      }
      if (i > 0 && !is_subset(levels[i].set, levels[i - 1].set)) {
        throw construction_error("level " + std::to_string(i) + " (alpha=" + std::to_string(a) +
                                 "): cut is not contained in the cut of level " + std::to_string(i - 1));
      }
    }
    if (levels.back().alpha != 1.0) {
      throw construction_error("level " + std::to_string(levels.size() - 1) + ": last alpha must be 1");
    }
    std::vector<Level> canon;
    for (auto& lv : levels) {
      if (!canon.empty() && canon.back().set == lv.set) {
        canon.back().alpha = lv.alpha;
      } else {
        canon.push_back(std::move(lv));
      }
    }
    return StepFuzzySet(std::move(canon));
  }

  const std::vector<Level>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  Space space() const { return levels_.front().set.space(); }

  /// Breakpoints γ_1 < ... < γ_k = 1.
  std::vector<double> breakpoints() const {
    std::vector<double> g;
    for (const auto& lv : levels_) g.push_back(lv.alpha);
    return g;
  }

  const GroundSet& cut(double alpha) const {
    require_alpha(alpha);
    auto it = std::lower_bound(levels_.begin(), levels_.end(), alpha,
                               [](const Level& lv, double a) { return lv.alpha < a; });
    return it->set;
  }

  friend bool operator==(const StepFuzzySet&, const StepFuzzySet&) = default;

 private:
  explicit StepFuzzySet(std::vector<Level> levels) : levels_(std::move(levels)) {}
  std::vector<Level> levels_;
};

inline StepFuzzySet make_step(std::vector<Level> levels) { return StepFuzzySet::make(std::move(levels)); }

/// x̂ = χ_{x}.
inline StepFuzzySet singleton(const GroundPoint& x) { return make_step({{1.0, GroundSet::singleton(x)}}); }

/// χ_S.
inline StepFuzzySet characteristic(const GroundSet& s) { return make_step({{1.0, s}}); }

struct Knot {
  double alpha;
  double a;
  double b;
  friend bool operator==(const Knot&, const Knot&) = default;
};

/// One affine stretch of a LinearFuzzyNumber over (lo, hi]; the *_lo values are the
/// right limits at lo, the *_hi values are attained at hi.
struct LinearPiece {
  double lo, hi;
  double a_lo, b_lo, a_hi, b_hi;

  double a_at(double t) const { return a_lo + (a_hi - a_lo) * (t - lo) / (hi - lo); }
  double b_at(double t) const { return b_lo + (b_hi - b_lo) * (t - lo) / (hi - lo); }
  double a_slope() const { return (a_hi - a_lo) / (hi - lo); }
  double b_slope() const { return (b_hi - b_lo) / (hi - lo); }
};

/// A fuzzy number on the line whose cut endpoints are piecewise linear in α.
///
/// Knots are listed by nondecreasing α from 0 to 1. An α may repeat once to encode a
/// jump: the first copy is the (left-continuous) value at α, the second the right limit.
class LinearFuzzyNumber {
 public:
  static LinearFuzzyNumber make(std::vector<Knot> knots) {
    if (knots.size() < 2) throw construction_error("linear fuzzy number needs at least two knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const auto& k = knots[i];
      const std::string at = "knot " + std::to_string(i) + ": ";
      if (!std::isfinite(k.alpha) || !std::isfinite(k.a) || !std::isfinite(k.b)) {
        throw construction_error(at + "values must be finite");
      }
      if (k.a > k.b) throw construction_error(at + "a > b");
      if (i > 0) {
        const auto& p = knots[i - 1];
        if (k.alpha < p.alpha) throw construction_error(at + "alphas must be nondecreasing");
        if (k.alpha == p.alpha && i > 1 && knots[i - 2].alpha == k.alpha) {
          throw construction_error(at + "an alpha may appear at most twice");
        }
        if (k.a < p.a) throw construction_error(at + "left endpoint decreases (cuts must be nested)");
        if (k.b > p.b) throw construction_error(at + "right endpoint increases (cuts must be nested)");
      }
    }
    if (knots.front().alpha != 0.0) throw construction_error("knot 0: first alpha must be 0");
    if (knots.back().alpha != 1.0) {
      throw construction_error("knot " + std::to_string(knots.size() - 1) + ": last alpha must be 1");
    }
    if (knots[1].alpha == 0.0) throw construction_error("knot 1: no jump allowed at alpha 0");
    if (knots[knots.size() - 2].alpha == 1.0) {
      throw construction_error("knot " + std::to_string(knots.size() - 1) + ": no jump allowed at alpha 1");
    }
    std::vector<LinearPiece> pieces;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const auto& p = knots[i];
      const auto& q = knots[i + 1];
      if (q.alpha == p.alpha) continue;
      pieces.push_back({p.alpha, q.alpha, p.a, p.b, q.a, q.b});
    }
    return LinearFuzzyNumber(std::move(knots), std::move(pieces));
  }

  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<LinearPiece>& pieces() const { return pieces_; }
  Space space() const { return Space{}; }

  const LinearPiece& piece_at(double alpha) const {
    require_alpha(alpha);
    if (alpha == 0.0) return pieces_.front();
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), alpha,
                               [](const LinearPiece& pc, double a) { return pc.hi < a; });
    return *it;
  }

  Interval cut_interval(double alpha) const {
    require_alpha(alpha);
    if (alpha == 0.0) return {knots_.front().a, knots_.front().b};
    const auto& pc = piece_at(alpha);
    if (alpha == pc.hi) return {pc.a_hi, pc.b_hi};
    return {pc.a_at(alpha), pc.b_at(alpha)};
  }

  GroundSet cut(double alpha) const {
    const auto iv = cut_interval(alpha);
    return GroundSet::interval(iv.lo, iv.hi);
  }

  /// Largest |slope| of either endpoint function.
  double slope_bound() const {
    double l = 0.0;
    for (const auto& pc : pieces_) l = std::max({l, std::abs(pc.a_slope()), std::abs(pc.b_slope())});
    return l;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> g;
    for (const auto& pc : pieces_) g.push_back(pc.hi);
    return g;
  }

  friend bool operator==(const LinearFuzzyNumber& x, const LinearFuzzyNumber& y) { return x.knots_ == y.knots_; }

 private:
  LinearFuzzyNumber(std::vector<Knot> knots, std::vector<LinearPiece> pieces)
      : knots_(std::move(knots)), pieces_(std::move(pieces)) {}

  std::vector<Knot> knots_;
  std::vector<LinearPiece> pieces_;
};

using FuzzySet = std::variant<StepFuzzySet, LinearFuzzyNumber>;

inline Space space_of(const FuzzySet& u) {
  return std::visit([](const auto& s) { return s.space(); }, u);
}

inline GroundSet cut(const FuzzySet& u, double alpha) {
  return std::visit([&](const auto& s) -> GroundSet { return s.cut(alpha); }, u);
}

inline std::vector<double> breakpoints(const FuzzySet& u) {
  return std::visit([](const auto& s) { return s.breakpoints(); }, u);
}

/// Exact conversion of a line step set whose cuts are single intervals.
inline std::optional<LinearFuzzyNumber> to_linear(const StepFuzzySet& u) {
  if (u.space().backend != Backend::line) return std::nullopt;
  std::vector<Knot> knots;
  for (const auto& lv : u.levels()) {
    if (lv.set.intervals().size() != 1) return std::nullopt;
  }
  const auto& lv = u.levels();
  const auto& first = lv.front().set.intervals().front();
  knots.push_back({0.0, first.lo, first.hi});
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const auto& iv = lv[i].set.intervals().front();
    if (i > 0) knots.push_back({lv[i - 1].alpha, iv.lo, iv.hi});
    knots.push_back({lv[i].alpha, iv.lo, iv.hi});
  }
  return LinearFuzzyNumber::make(std::move(knots));
}

/// Inner step approximation: on every grid cell (g_{m-1}, g_m] the cut is cut(u, g_m).
/// `cells_per_sloped_piece` cells are used on pieces with a moving endpoint, one on flat pieces.
inline StepFuzzySet discretize(const LinearFuzzyNumber& u, long cells_per_sloped_piece) {
  if (cells_per_sloped_piece < 1) throw domain_error("discretize: need at least one cell per piece");
  std::vector<Level> levels;
  for (const auto& pc : u.pieces()) {
    const bool flat = pc.a_lo == pc.a_hi && pc.b_lo == pc.b_hi;
    const long n = flat ? 1 : cells_per_sloped_piece;
    for (long m = 1; m <= n; ++m) {
      const double g = m == n ? pc.hi : pc.lo + (pc.hi - pc.lo) * static_cast<double>(m) / static_cast<double>(n);
      const double a = m == n ? pc.a_hi : pc.a_at(g);
      const double b = m == n ? pc.b_hi : pc.b_at(g);
      if (!levels.empty() && g <= levels.back().alpha) continue;
      levels.push_back({g, GroundSet::interval(a, b)});
    }
  }
  return make_step(std::move(levels));
}

struct Cylinder {
  GroundSet base;
  double lo;
  double hi;
};

/// A finite union of cylinders S × [lo, hi] in X × [0,1], plus optionally the slab X × {0}.
struct GraphSet {
  std::vector<Cylinder> cylinders;
  bool has_base_slab = false;
};

/// end u = X×{0} ∪ ⋃_i C_i × [0, γ_i].
inline GraphSet endograph(const StepFuzzySet& u) {
  GraphSet g;
  g.has_base_slab = true;
  for (const auto& lv : u.levels()) g.cylinders.push_back({lv.set, 0.0, lv.alpha});
  return g;
}

/// send u = end u ∩ ([u]_0 × [0,1]) = [u]_0 × {0} ∪ ⋃_i C_i × [0, γ_i].
inline GraphSet sendograph(const StepFuzzySet& u) {
  GraphSet g;
  g.has_base_slab = false;
  g.cylinders.push_back({u.levels().front().set, 0.0, 0.0});
  for (const auto& lv : u.levels()) g.cylinders.push_back({lv.set, 0.0, lv.alpha});
  return g;
}

/// ∏_j u_j with [u]_α = ∏_j [u_j]_α over the merged breakpoint grid.
inline StepFuzzySet product_fuzzy(const std::vector<StepFuzzySet>& us) {
  if (us.empty()) throw domain_error("product_fuzzy needs at least one factor");
  std::vector<double> grid;
  for (const auto& u : us) {
    auto g = u.breakpoints();
    grid.insert(grid.end(), g.begin(), g.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<Level> levels;
  for (double g : grid) {
    std::vector<GroundSet> factors;
    for (const auto& u : us) factors.push_back(u.cut(g));
    levels.push_back({g, GroundSet::product(std::move(factors))});
  }
  return make_step(std::move(levels));
}

/// u^ε: cuts above ε unchanged, cuts at or below ε replaced by [u]_ε.
inline StepFuzzySet truncate(const StepFuzzySet& u, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("truncate: epsilon must lie in (0,1)");
  std::vector<Level> levels;
  levels.push_back({eps, u.cut(eps)});
  for (const auto& lv : u.levels())
    if (lv.alpha > eps) levels.push_back(lv);
  return make_step(std::move(levels));
}

/// u_Y: reinterprets u over a matrix space X inside a superspace Y. `embedding[i]` is the
/// Y-index of X-point i; distances of embedded pairs must agree.
inline StepFuzzySet zero_extend(const StepFuzzySet& u, const MatrixSpacePtr& superspace,
                                const std::vector<std::size_t>& embedding) {
  const Space s = u.space();
  if (s.backend != Backend::matrix) throw usage_error("zero_extend: fuzzy set must live in a matrix space");
  if (!superspace) throw usage_error("zero_extend: missing superspace");
  const auto& x = *s.matrix;
  if (embedding.size() != x.size()) throw construction_error("zero_extend: embedding must map every point of X");
  std::vector<std::size_t> seen(embedding);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw construction_error("zero_extend: embedding is not injective");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (embedding[i] >= superspace->size()) throw construction_error("zero_extend: embedding index out of range");
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::abs(x.at(i, j) - superspace->at(embedding[i], embedding[j])) > kTolerance) {
        throw construction_error("zero_extend: distance mismatch on embedded pair (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
      }
    }
  }
  std::vector<Level> levels;
  for (const auto& lv : u.levels()) {
    std::vector<std::size_t> idx;
    for (auto i : lv.set.indices()) idx.push_back(embedding[i]);
    levels.push_back({lv.alpha, GroundSet::matrix(superspace, std::move(idx))});
  }
  return make_step(std::move(levels));
}

}  // namespace fuzzmetrics

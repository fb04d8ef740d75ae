#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ext_real.hpp"
#include "fuzzmetrics/ground_space.hpp"

namespace fuzzmetrics {

/// A line interval carrying an additive offset: contributes weight + d(x, [lo,hi]).
struct WeightedInterval {
  double lo;
  double hi;
  double weight;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lower envelope f(x) = min_I (w_I + d(x, I)) evaluated at one point, O(n).
inline double envelope_at(double x, const std::vector<WeightedInterval>& targets) {
  double best = kInf;
  for (const auto& t : targets) {
    const double d = x < t.lo ? t.lo - x : (x > t.hi ? x - t.hi : 0.0);
    best = std::min(best, t.weight + d);
  }
  return best;
}

}  // namespace detail

/// sup_{x ∈ domain} min_I (w_I + d(x, I)).
///
/// The envelope is piecewise linear with slopes in {-1, 0, +1}. Between two consecutive
/// interval endpoints every target interval is either entirely left, entirely right or
/// covering, so the envelope there is min(x + A, B - x, M) and its maximum sits at a
/// segment end or at x = (B - A) / 2. Sweeping the sorted endpoints gives the exact sup
/// in O(n log n).
inline double sup_weighted_envelope(const std::vector<Interval>& domain, const std::vector<WeightedInterval>& targets) {
  using detail::kInf;
  if (targets.empty()) return kInf;

  std::vector<double> events;
  events.reserve(2 * (targets.size() + domain.size()));
  for (const auto& t : targets) {
    events.push_back(t.lo);
    events.push_back(t.hi);
  }
  for (const auto& d : domain) {
    events.push_back(d.lo);
    events.push_back(d.hi);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  // A(x) = min_{hi <= x} (w - hi), B(x) = min_{lo >= x} (w + lo).
  std::vector<WeightedInterval> by_hi(targets), by_lo(targets);
  std::sort(by_hi.begin(), by_hi.end(), [](const auto& a, const auto& b) { return a.hi < b.hi; });
  std::sort(by_lo.begin(), by_lo.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::vector<double> prefix_a(by_hi.size());
  for (std::size_t i = 0; i < by_hi.size(); ++i) {
    const double v = by_hi[i].weight - by_hi[i].hi;
    prefix_a[i] = i == 0 ? v : std::min(prefix_a[i - 1], v);
  }
  std::vector<double> suffix_b(by_lo.size());
  for (std::size_t i = by_lo.size(); i-- > 0;) {
    const double v = by_lo[i].weight + by_lo[i].lo;
    suffix_b[i] = i + 1 == by_lo.size() ? v : std::min(suffix_b[i + 1], v);
  }
  auto left_min = [&](double x) {
    auto it = std::upper_bound(by_hi.begin(), by_hi.end(), x, [](double v, const auto& t) { return v < t.hi; });
    const auto n = static_cast<std::size_t>(it - by_hi.begin());
    return n == 0 ? kInf : prefix_a[n - 1];
  };
  auto right_min = [&](double x) {
    auto it = std::lower_bound(by_lo.begin(), by_lo.end(), x, [](const auto& t, double v) { return t.lo < v; });
    const auto n = static_cast<std::size_t>(it - by_lo.begin());
    return n == by_lo.size() ? kInf : suffix_b[n];
  };

  double best = -kInf;
  std::size_t dom = 0;  // domain interval cursor

  // Covering weights via a lazy-deletion heap of (weight, hi).
  using Entry = std::pair<double, double>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> covering;
  std::size_t next_lo = 0;

  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    const double e0 = events[k];
    const double e1 = events[k + 1];
    while (next_lo < by_lo.size() && by_lo[next_lo].lo <= e0) {
      covering.emplace(by_lo[next_lo].weight, by_lo[next_lo].hi);
      ++next_lo;
    }
    while (!covering.empty() && covering.top().second <= e0) covering.pop();

    const double mid = 0.5 * (e0 + e1);
    while (dom < domain.size() && domain[dom].hi < mid) ++dom;
    if (dom == domain.size()) break;
    if (domain[dom].lo > mid) continue;

    const double a = left_min(e0);
    const double b = right_min(e1);
    const double m = covering.empty() ? kInf : covering.top().first;
    auto f = [&](double x) { return std::min({x + a, b - x, m}); };
    best = std::max({best, f(e0), f(e1)});
    const double cross = 0.5 * (b - a);
    if (cross > e0 && cross < e1) best = std::max(best, f(cross));
  }
  // Isolated domain points are not covered by any segment.
  for (const auto& d : domain) {
    if (d.lo == d.hi) best = std::max(best, detail::envelope_at(d.lo, targets));
  }
  return best;
}

namespace detail {

inline double hausdorff_pre_raw(const GroundSet& a, const GroundSet& b) {
  switch (a.backend()) {
    case Backend::line: {
      std::vector<WeightedInterval> t;
      t.reserve(b.intervals().size());
      for (const auto& iv : b.intervals()) t.push_back({iv.lo, iv.hi, 0.0});
      return std::max(0.0, sup_weighted_envelope(a.intervals(), t));
    }
    case Backend::euclidean: {
      double m = 0.0;
      for (const auto& p : a.points()) {
        double best = kInf;
        for (const auto& q : b.points()) best = std::min(best, euclid(p, q));
        m = std::max(m, best);
      }
      return m;
    }
    case Backend::matrix: {
      double m = 0.0;
      const auto& sp = *a.matrix_space();
      for (auto i : a.indices()) {
        double best = kInf;
        for (auto j : b.indices()) best = std::min(best, sp.at(i, j));
        m = std::max(m, best);
      }
      return m;
    }
    case Backend::product: {
      double m = 0.0;
      for (std::size_t j = 0; j < a.factors().size(); ++j)
        m = std::max(m, hausdorff_pre_raw(a.factors()[j], b.factors()[j]));
      return m;
    }
  }
  return 0.0;
}

}  // namespace detail

/// H*(A,B) = sup_{a ∈ A} d(a, B).
inline ExtReal hausdorff_pre(const GroundSet& a, const GroundSet& b) {
  require_same_space(a.space(), b.space(), "hausdorff_pre");
  return detail::hausdorff_pre_raw(a, b);
}

/// H(A,B) = max{H*(A,B), H*(B,A)}.
inline ExtReal hausdorff(const GroundSet& a, const GroundSet& b) {
  require_same_space(a.space(), b.space(), "hausdorff");
  return std::max(detail::hausdorff_pre_raw(a, b), detail::hausdorff_pre_raw(b, a));
}

/// Hausdorff extended metric on nonempty sets plus ∅: H'(∅,∅) = 0, H'(∅,S) = +∞.
inline ExtReal hausdorff_ext(const std::optional<GroundSet>& a, const std::optional<GroundSet>& b) {
  if (!a && !b) return 0.0;
  if (!a || !b) return ExtReal::infinity();
  return hausdorff(*a, *b);
}

/// Hausdorff distance of ∏A_j and ∏B_j under the sup metric: max_j H(A_j, B_j).
inline ExtReal hausdorff_product(const std::vector<GroundSet>& as, const std::vector<GroundSet>& bs) {
  if (as.empty()) throw domain_error("hausdorff_product needs at least one component");
  if (as.size() != bs.size()) throw usage_error("hausdorff_product: length mismatch");
  ExtReal m = 0.0;
  for (std::size_t j = 0; j < as.size(); ++j) m = max(m, hausdorff(as[j], bs[j]));
  return m;
}

}  // namespace fuzzmetrics

#pragma once

// Metrics on level-set represented fuzzy sets:
//   d_p     (∫_0^1 H([u]_α,[v]_α)^p dα)^{1/p}
//   d_∞     sup_α H([u]_α,[v]_α)
//   H_end   Hausdorff distance of endographs in X×[0,1]   (SUM: d(x,y)+|α-β|, MAX: max{d(x,y),|α-β|})
//   H_send  Hausdorff distance of sendographs
//
// Because the Hausdorff function of two represented sets is integrable, d_p coincides with
// the infimum-over-majorants variant d_p*; only d_p is exposed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "fuzzmetrics/config.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ext_real.hpp"
#include "fuzzmetrics/fuzzy.hpp"
#include "fuzzmetrics/ground_space.hpp"
#include "fuzzmetrics/hausdorff.hpp"

namespace fuzzmetrics {

struct MetricResult {
  ExtReal value;
  bool exact = true;
  double error_bound = 0.0;

  static MetricResult exact_value(double v) { return {ExtReal(v), true, 0.0}; }
  static MetricResult certified(double v, double bound) { return {ExtReal(v), bound == 0.0, bound}; }
  double v() const { return value.value(); }
};

/// Product metric on X×[0,1]: SUM is d̄ = d + |α-β|, MAX is d̂ = max{d, |α-β|}.
enum class ProductMetricKind { sum, max };

inline void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("p must satisfy 1 <= p < inf");
}

/// ∫ over an interval of length len of h(α)^p, h affine from h0 to h1 (both >= 0).
inline double integrate_affine_power(double h0, double h1, double len, double p) {
  if (len <= 0.0) return 0.0;
  const double lo = std::min(h0, h1);
  const double hi = std::max(h0, h1);
  if (hi <= 0.0) return 0.0;
  if (p == 1.0) return len * 0.5 * (lo + hi);
  if (hi - lo <= 1e-14 * hi) return len * std::pow(0.5 * (lo + hi), p);
  if (lo <= 0.0) return len * std::pow(hi, p) / (p + 1.0);
  // (hi^{p+1} - lo^{p+1}) / ((p+1)(hi-lo)) without cancellation.
  const double num = std::pow(lo, p + 1.0) * std::expm1((p + 1.0) * std::log1p((hi - lo) / lo));
  return len * num / ((p + 1.0) * (hi - lo));
}

namespace detail {

/// One stretch of a piecewise-affine Hausdorff profile α ↦ H(α) over (lo, hi].
struct ProfilePiece {
  double lo, hi;
  double h_lo, h_hi;  // right limit at lo, value at hi
};

/// Appends the affine pieces of max(|Δa|, |Δb|) on (lo, hi] for affine Δa, Δb given by
/// their values at both ends.
inline void append_abs_max_pieces(double lo, double hi, double da0, double da1, double db0, double db1,
                                  std::vector<ProfilePiece>& out) {
  if (!(hi > lo)) return;
  std::vector<double> cuts{0.0, 1.0};
  auto root = [&](double f0, double f1) {
    if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) cuts.push_back(f0 / (f0 - f1));
  };
  root(da0, da1);
  root(db0, db1);
  root(da0 - db0, da1 - db1);
  root(da0 + db0, da1 + db1);
  std::sort(cuts.begin(), cuts.end());
  auto h = [&](double s) {
    const double da = da0 + (da1 - da0) * s;
    const double db = db0 + (db1 - db0) * s;
    return std::max(std::abs(da), std::abs(db));
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s0 = cuts[i], s1 = cuts[i + 1];
    if (!(s1 > s0)) continue;
    const double a0 = i == 0 ? lo : lo + (hi - lo) * s0;
    const double a1 = i + 2 == cuts.size() ? hi : lo + (hi - lo) * s1;
    out.push_back({a0, a1, h(s0), h(s1)});
  }
}

/// α ↦ cut(u, α - shift) for a LinearFuzzyNumber.
struct ShiftedLinear {
  const LinearFuzzyNumber* u;
  double shift;

  const LinearPiece& piece(double mid) const { return u->piece_at(std::clamp(mid - shift, 0.0, 1.0)); }
};

inline std::vector<double> merged_grid(double lo, double hi, std::initializer_list<std::pair<std::vector<double>, double>> sources) {
  std::vector<double> g{lo, hi};
  for (const auto& [points, shift] : sources) {
    for (double x : points) {
      const double y = x + shift;
      if (y > lo && y < hi) g.push_back(y);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

/// Affine pieces of α ↦ H(cut(u, α - su), cut(v, α - sv)) on (lo, hi].
inline std::vector<ProfilePiece> linear_profile(const ShiftedLinear& u, const ShiftedLinear& v, double lo, double hi) {
  std::vector<ProfilePiece> out;
  const auto grid = merged_grid(lo, hi, {{u.u->breakpoints(), u.shift}, {v.u->breakpoints(), v.shift}});
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double g0 = grid[i], g1 = grid[i + 1];
    const double mid = 0.5 * (g0 + g1);
    const auto& pu = u.piece(mid);
    const auto& pv = v.piece(mid);
    auto at = [](const LinearPiece& pc, double t, bool left) { return left ? pc.a_at(t) : pc.b_at(t); };
    const double da0 = at(pu, g0 - u.shift, true) - at(pv, g0 - v.shift, true);
    const double da1 = at(pu, g1 - u.shift, true) - at(pv, g1 - v.shift, true);
    const double db0 = at(pu, g0 - u.shift, false) - at(pv, g0 - v.shift, false);
    const double db1 = at(pu, g1 - u.shift, false) - at(pv, g1 - v.shift, false);
    append_abs_max_pieces(g0, g1, da0, da1, db0, db1, out);
  }
  return out;
}

inline double profile_power_integral(const std::vector<ProfilePiece>& pieces, double p) {
  double s = 0.0;
  for (const auto& pc : pieces) s += integrate_affine_power(pc.h_lo, pc.h_hi, pc.hi - pc.lo, p);
  return s;
}

inline double profile_sup(const std::vector<ProfilePiece>& pieces) {
  double m = 0.0;
  for (const auto& pc : pieces) m = std::max({m, pc.h_lo, pc.h_hi});
  return m;
}

/// Piecewise-constant profile α ↦ H(cut(u, α - su), cut(v, α - sv)) of two step sets on (lo, hi].
inline std::vector<ProfilePiece> step_profile(const StepFuzzySet& u, double su, const StepFuzzySet& v, double sv,
                                              double lo, double hi) {
  std::vector<ProfilePiece> out;
  const auto grid = merged_grid(lo, hi, {{u.breakpoints(), su}, {v.breakpoints(), sv}});
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    // Constant on each open cell; the midpoint keeps shifted lookups off rounded breakpoints.
    const double g1 = grid[i + 1];
    const double mid = 0.5 * (grid[i] + g1);
    const double h = hausdorff(u.cut(std::clamp(mid - su, 0.0, 1.0)), v.cut(std::clamp(mid - sv, 0.0, 1.0))).value();
    out.push_back({grid[i], g1, h, h});
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// Certified path for mixed pairs (a line step set with multi-interval cuts vs a linear
// fuzzy number). H(α) is L-Lipschitz inside every merged-grid cell, so a cell of width w
// evaluated at its midpoint brackets H within ±L·w/2.

namespace detail {

struct CertCell {
  double lo, hi;
  double h_mid;
};

struct CertifiedProfile {
  std::vector<CertCell> cells;
  double lipschitz;
};

template <typename HFn>
inline CertifiedProfile initial_cells(const std::vector<double>& grid, HFn&& h, double lipschitz) {
  CertifiedProfile prof{{}, lipschitz};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    prof.cells.push_back({grid[i], grid[i + 1], h(mid)});
  }
  return prof;
}

/// Bisects the cells selected by `wanted` until `gap` drops below tol or limits are hit.
template <typename HFn, typename GapFn, typename WantFn>
inline void refine(CertifiedProfile& prof, HFn&& h, GapFn&& gap, WantFn&& wanted, double tol) {
  const double min_width = std::ldexp(1.0, -kMaxRefinements);
  std::size_t budget = static_cast<std::size_t>(kMaxDiscretizationLevels);
  while (prof.cells.size() < budget) {
    const double g = gap(prof);
    if (g <= tol) return;
    const auto want = wanted(prof);
    std::vector<CertCell> next;
    next.reserve(prof.cells.size() * 2);
    bool split_any = false;
    for (const auto& c : prof.cells) {
      const double w = c.hi - c.lo;
      if (want(c) && w > min_width && prof.lipschitz > 0.0) {
        const double m = 0.5 * (c.lo + c.hi);
        next.push_back({c.lo, m, h(0.5 * (c.lo + m))});
        next.push_back({m, c.hi, h(0.5 * (m + c.hi))});
        split_any = true;
      } else {
        next.push_back(c);
      }
    }
    prof.cells = std::move(next);
    if (!split_any) return;
  }
}

/// Splits every cell at least as wide as the mean width (d_p brackets shrink everywhere).
inline auto wide_cells(const CertifiedProfile& prof) {
  double mean = 0.0;
  for (const auto& c : prof.cells) mean += (c.hi - c.lo);
  mean /= static_cast<double>(prof.cells.size());
  return [mean](const CertCell& c) { return c.hi - c.lo >= mean; };
}

inline std::pair<double, double> dp_bracket(const CertifiedProfile& prof, double p) {
  double lo = 0.0, hi = 0.0;
  for (const auto& c : prof.cells) {
    const double w = c.hi - c.lo;
    const double r = prof.lipschitz * w * 0.5;
    lo += w * std::pow(std::max(0.0, c.h_mid - r), p);
    hi += w * std::pow(c.h_mid + r, p);
  }
  return {std::pow(lo, 1.0 / p), std::pow(hi, 1.0 / p)};
}

inline std::pair<double, double> sup_bracket(const CertifiedProfile& prof) {
  double lo = 0.0, hi = 0.0;
  for (const auto& c : prof.cells) {
    lo = std::max(lo, c.h_mid);
    hi = std::max(hi, c.h_mid + prof.lipschitz * (c.hi - c.lo) * 0.5);
  }
  return {lo, hi};
}

inline CertifiedProfile mixed_profile(const StepFuzzySet& s, const LinearFuzzyNumber& l) {
  auto h = [&](double a) {
    const auto iv = l.cut_interval(a);
    return hausdorff(s.cut(a), GroundSet::interval(iv.lo, iv.hi)).value();
  };
  const auto grid = merged_grid(0.0, 1.0, {{s.breakpoints(), 0.0}, {l.breakpoints(), 0.0}});
  return initial_cells(grid, h, l.slope_bound());
}

inline MetricResult certified_dp(const StepFuzzySet& s, const LinearFuzzyNumber& l, double p, double tol) {
  auto h = [&](double a) {
    const auto iv = l.cut_interval(a);
    return hausdorff(s.cut(a), GroundSet::interval(iv.lo, iv.hi)).value();
  };
  auto prof = mixed_profile(s, l);
  auto gap = [&](const CertifiedProfile& pr) {
    const auto [lo, hi] = dp_bracket(pr, p);
    return 0.5 * (hi - lo);
  };
  refine(prof, h, gap, wide_cells, tol);
  const auto [lo, hi] = dp_bracket(prof, p);
  const double err = 0.5 * (hi - lo);
  if (err > tol) throw tolerance_error("d_p: certified tolerance not reached", err);
  return MetricResult::certified(0.5 * (lo + hi), err);
}

inline MetricResult certified_dinf(const StepFuzzySet& s, const LinearFuzzyNumber& l, double tol) {
  auto h = [&](double a) {
    const auto iv = l.cut_interval(a);
    return hausdorff(s.cut(a), GroundSet::interval(iv.lo, iv.hi)).value();
  };
  auto prof = mixed_profile(s, l);
  auto gap = [&](const CertifiedProfile& pr) {
    const auto [lo, hi] = sup_bracket(pr);
    return 0.5 * (hi - lo);
  };
  // Branch and bound: only cells whose upper bound can still beat the best midpoint value.
  auto promising = [&](const CertifiedProfile& pr) {
    const double best = sup_bracket(pr).first;
    const double l = pr.lipschitz;
    return [best, l, tol](const CertCell& c) { return c.h_mid + l * (c.hi - c.lo) * 0.5 > best + tol; };
  };
  refine(prof, h, gap, promising, tol);
  const auto [lo, hi] = sup_bracket(prof);
  const double err = 0.5 * (hi - lo);
  if (err > tol) throw tolerance_error("d_inf: certified tolerance not reached", err);
  return MetricResult::certified(0.5 * (lo + hi), err);
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// d_p and d_∞

inline MetricResult d_p(const StepFuzzySet& u, const StepFuzzySet& v, double p) {
  require_p(p);
  require_same_space(u.space(), v.space(), "d_p");
  const auto prof = detail::step_profile(u, 0.0, v, 0.0, 0.0, 1.0);
  return MetricResult::exact_value(std::pow(detail::profile_power_integral(prof, p), 1.0 / p));
}

inline MetricResult d_p(const LinearFuzzyNumber& u, const LinearFuzzyNumber& v, double p) {
  require_p(p);
  const auto prof = detail::linear_profile({&u, 0.0}, {&v, 0.0}, 0.0, 1.0);
  return MetricResult::exact_value(std::pow(detail::profile_power_integral(prof, p), 1.0 / p));
}

inline MetricResult d_infty(const StepFuzzySet& u, const StepFuzzySet& v) {
  require_same_space(u.space(), v.space(), "d_infty");
  return MetricResult::exact_value(detail::profile_sup(detail::step_profile(u, 0.0, v, 0.0, 0.0, 1.0)));
}

inline MetricResult d_infty(const LinearFuzzyNumber& u, const LinearFuzzyNumber& v) {
  return MetricResult::exact_value(detail::profile_sup(detail::linear_profile({&u, 0.0}, {&v, 0.0}, 0.0, 1.0)));
}

inline MetricResult d_p(const FuzzySet& u, const FuzzySet& v, double p, double tol = kDefaultCertifiedTolerance) {
  require_p(p);
  require_same_space(space_of(u), space_of(v), "d_p");
  if (const auto* su = std::get_if<StepFuzzySet>(&u)) {
    if (const auto* sv = std::get_if<StepFuzzySet>(&v)) return d_p(*su, *sv, p);
    const auto& lv = std::get<LinearFuzzyNumber>(v);
    if (auto lu = to_linear(*su)) return d_p(*lu, lv, p);
    return detail::certified_dp(*su, lv, p, tol);
  }
  const auto& lu = std::get<LinearFuzzyNumber>(u);
  if (const auto* sv = std::get_if<StepFuzzySet>(&v)) {
    if (auto lv = to_linear(*sv)) return d_p(lu, *lv, p);
    return detail::certified_dp(*sv, lu, p, tol);
  }
  return d_p(lu, std::get<LinearFuzzyNumber>(v), p);
}

inline MetricResult d_infty(const FuzzySet& u, const FuzzySet& v, double tol = kDefaultCertifiedTolerance) {
  require_same_space(space_of(u), space_of(v), "d_infty");
  if (const auto* su = std::get_if<StepFuzzySet>(&u)) {
    if (const auto* sv = std::get_if<StepFuzzySet>(&v)) return d_infty(*su, *sv);
    const auto& lv = std::get<LinearFuzzyNumber>(v);
    if (auto lu = to_linear(*su)) return d_infty(*lu, lv);
    return detail::certified_dinf(*su, lv, tol);
  }
  const auto& lu = std::get<LinearFuzzyNumber>(u);
  if (const auto* sv = std::get_if<StepFuzzySet>(&v)) {
    if (auto lv = to_linear(*sv)) return d_infty(lu, *lv);
    return detail::certified_dinf(*sv, lu, tol);
  }
  return d_infty(lu, std::get<LinearFuzzyNumber>(v));
}

// ---------------------------------------------------------------------------------------
// Endograph / sendograph distances between step sets.
//
// The distance from (x,t) to a graph set is nondecreasing in t, so the sup of
// d((x,t), end v) over a cylinder C_j × [0,γ_j] is reached on its top face:
//   H*(end u, end v) = max_j sup_{x ∈ C_j} min(γ_j, min_i φ_i(x)),
//   φ_i(x) = d(x, D_i) + (γ_j - β_i)^+          (SUM)
//   φ_i(x) = max(d(x, D_i), (γ_j - β_i)^+)      (MAX)
// The γ_j cap is the distance to the slab X×{0}; sendographs have no slab.

namespace detail {

inline double graph_pre_step(const StepFuzzySet& u, const StepFuzzySet& v, ProductMetricKind kind, bool slab) {
  const auto& vl = v.levels();
  double best = 0.0;
  for (const auto& src : u.levels()) {
    const double top = src.alpha;
    // Levels with β_i >= top all have zero height penalty; the lowest of them dominates.
    std::vector<std::pair<const GroundSet*, double>> targets;
    for (std::size_t i = 0; i < vl.size(); ++i) {
      if (vl[i].alpha < top) {
        targets.emplace_back(&vl[i].set, top - vl[i].alpha);
      } else {
        targets.emplace_back(&vl[i].set, 0.0);
        break;
      }
    }
    double sup = 0.0;
    const GroundSet& c = src.set;
    if (c.backend() == Backend::line) {
      std::vector<WeightedInterval> w;
      for (const auto& [set, pen] : targets) {
        for (const auto& iv : set->intervals()) {
          if (kind == ProductMetricKind::sum) {
            w.push_back({iv.lo, iv.hi, pen});
          } else {
            w.push_back({iv.lo - pen, iv.hi + pen, pen});
          }
        }
      }
      sup = std::max(0.0, sup_weighted_envelope(c.intervals(), w));
    } else {
      if (!c.is_finite()) throw domain_error("endograph distance over a product needs finitely enumerable factors");
      for (const auto& x : c.enumerate()) {
        double m = kInf;
        for (const auto& [set, pen] : targets) {
          const double d = dist_to_set_raw(x, *set);
          m = std::min(m, kind == ProductMetricKind::sum ? d + pen : std::max(d, pen));
        }
        sup = std::max(sup, m);
      }
    }
    best = std::max(best, slab ? std::min(top, sup) : sup);
  }
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// Endograph / sendograph distances between linear fuzzy numbers (exact).
//
// For a single-interval target v, d((x,t), end v) is nonincreasing in x left of [v]_t,
// zero on it, nondecreasing right of it. The sup over a slice [u]_t × {t} is therefore
// attained at its endpoints, and H*(end u, end v) is the max of the distance function
// along the two boundary polylines of u. Along one boundary segment the distance is a
// continuous piecewise-affine function of the segment parameter whose breakpoints lie at
// pairwise intersections of a finite family of affine functions (fixed levels, the level
// equal to t, and the levels tracking a contact point); evaluating the exact distance at
// every such intersection yields the exact sup.

namespace detail {

/// d((x,t), end v) (slab) or d((x,t), send v) for a linear fuzzy number v.
inline double linear_graph_distance(double x, double t, const LinearFuzzyNumber& v, ProductMetricKind kind,
                                    bool slab) {
  const bool sum = kind == ProductMetricKind::sum;
  auto cost = [&](double s) {
    const Interval iv = v.cut_interval(std::clamp(s, 0.0, 1.0));
    const double d = x < iv.lo ? iv.lo - x : (x > iv.hi ? x - iv.hi : 0.0);
    const double dt = t - s;
    return sum ? dt + d : std::max(dt, d);
  };
  double best = slab ? t : kInf;
  best = std::min({best, cost(0.0), cost(t)});
  for (const auto& pc : v.pieces()) {
    if (!(pc.lo < t)) break;
    const double hi = std::min(pc.hi, t);
    best = std::min(best, cost(pc.lo));
    best = std::min(best, cost(hi));
    const double ba = pc.a_slope();
    const double bb = pc.b_slope();
    auto consider = [&](double s) {
      if (s > pc.lo && s < hi) best = std::min(best, cost(s));
    };
    if (ba != 0.0) consider(pc.lo + (x - pc.a_lo) / ba);
    if (bb != 0.0) consider(pc.lo + (x - pc.b_lo) / bb);
    if (!sum) {
      consider((t + x - pc.a_lo + ba * pc.lo) / (1.0 + ba));
      consider((t - x + pc.b_lo - bb * pc.lo) / (1.0 - bb));
    }
  }
  return best;
}

struct Affine {
  double c0, c1;  // c0 + c1·λ
};

/// Affine functions of λ whose pairwise crossings contain every breakpoint of the distance
/// from (x0 + λ dx, t0 + λ dt) to the graph of v.
inline std::vector<Affine> breakpoint_family(double x0, double dx, double t0, double dt, const LinearFuzzyNumber& v,
                                             ProductMetricKind kind) {
  const bool sum = kind == ProductMetricKind::sum;
  std::vector<Affine> f{{t0, dt}, {0.0, 0.0}};
  for (const auto& k : v.knots()) {
    const Affine tt{t0 - k.alpha, dt};
    const Affine a{k.a - x0, -dx};
    const Affine b{x0 - k.b, dx};
    f.push_back(tt);
    if (sum) {
      f.push_back({tt.c0 + a.c0, tt.c1 + a.c1});
      f.push_back({tt.c0 + b.c0, tt.c1 + b.c1});
    } else {
      f.push_back(a);
      f.push_back(b);
    }
  }
  for (const auto& pc : v.pieces()) {
    const double ba = pc.a_slope();
    const double bb = pc.b_slope();
    // level s = t
    f.push_back({pc.a_lo + ba * (t0 - pc.lo) - x0, ba * dt - dx});
    f.push_back({x0 - pc.b_lo - bb * (t0 - pc.lo), dx - bb * dt});
    // contact levels a(s) = x and b(s) = x; value t - s
    auto track = [&](double s0, double s1) { f.push_back({t0 - s0, dt - s1}); };
    if (ba != 0.0) track(pc.lo + (x0 - pc.a_lo) / ba, dx / ba);
    if (bb != 0.0) track(pc.lo + (x0 - pc.b_lo) / bb, dx / bb);
    if (!sum) {
      // t - s = a(s) - x  and  t - s = x - b(s)
      track((t0 + x0 - pc.a_lo + ba * pc.lo) / (1.0 + ba), (dt + dx) / (1.0 + ba));
      track((t0 - x0 + pc.b_lo - bb * pc.lo) / (1.0 - bb), (dt - dx) / (1.0 - bb));
    }
  }
  return f;
}

inline double segment_sup(double x0, double t0, double x1, double t1, const LinearFuzzyNumber& v,
                          ProductMetricKind kind, bool slab) {
  const double dx = x1 - x0, dt = t1 - t0;
  auto phi = [&](double lam) {
    return linear_graph_distance(x0 + lam * dx, t0 + lam * dt, v, kind, slab);
  };
  double best = std::max(phi(0.0), phi(1.0));
  const auto fam = breakpoint_family(x0, dx, t0, dt, v, kind);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      const double den = fam[i].c1 - fam[j].c1;
      if (den == 0.0) continue;
      const double lam = (fam[j].c0 - fam[i].c0) / den;
      if (lam > 0.0 && lam < 1.0) best = std::max(best, phi(lam));
    }
  }
  return best;
}

inline double graph_pre_linear(const LinearFuzzyNumber& u, const LinearFuzzyNumber& v, ProductMetricKind kind,
                               bool slab) {
  double best = 0.0;
  for (const auto& pc : u.pieces()) {
    best = std::max(best, segment_sup(pc.a_lo, pc.lo, pc.a_hi, pc.hi, v, kind, slab));
    best = std::max(best, segment_sup(pc.b_lo, pc.lo, pc.b_hi, pc.hi, v, kind, slab));
  }
  return best;
}

/// Step approximation error of a linear fuzzy number's graph: moving a point down to the
/// previous grid level costs at most the cell width; moving it sideways at most L·width.
inline double graph_discretization_bound(const LinearFuzzyNumber& u, long cells, bool slab) {
  double bound = 0.0;
  for (const auto& pc : u.pieces()) {
    const double l = std::max(std::abs(pc.a_slope()), std::abs(pc.b_slope()));
    if (l == 0.0) continue;
    const double w = (pc.hi - pc.lo) / static_cast<double>(cells);
    const bool first = pc.lo == 0.0;
    bound = std::max(bound, w * ((slab || !first) ? std::min(1.0, l) : l));
  }
  return bound;
}

inline MetricResult certified_graph(const StepFuzzySet& s, const LinearFuzzyNumber& l, ProductMetricKind kind,
                                    bool slab, double tol) {
  long cells = 8;
  double bound = graph_discretization_bound(l, cells, slab);
  StepFuzzySet approx = discretize(l, cells);
  for (int round = 0; bound > tol && round < kMaxRefinements; ++round) {
    const long next = cells * 2;
    if (next * static_cast<long>(l.pieces().size()) > kMaxDiscretizationLevels) break;
    cells = next;
    bound = graph_discretization_bound(l, cells, slab);
  }
  if (bound > tol) throw tolerance_error("graph metric: certified tolerance not reached", bound);
  approx = discretize(l, cells);
  const double val = std::max(graph_pre_step(s, approx, kind, slab), graph_pre_step(approx, s, kind, slab));
  return MetricResult::certified(val, bound);
}

inline MetricResult graph_metric(const FuzzySet& u, const FuzzySet& v, ProductMetricKind kind, bool slab,
                                 double tol, const char* name) {
  require_same_space(space_of(u), space_of(v), name);
  auto linear_pair = [&](const LinearFuzzyNumber& a, const LinearFuzzyNumber& b) {
    return MetricResult::exact_value(std::max(graph_pre_linear(a, b, kind, slab), graph_pre_linear(b, a, kind, slab)));
  };
  if (const auto* su = std::get_if<StepFuzzySet>(&u)) {
    if (const auto* sv = std::get_if<StepFuzzySet>(&v)) {
      return MetricResult::exact_value(
          std::max(graph_pre_step(*su, *sv, kind, slab), graph_pre_step(*sv, *su, kind, slab)));
    }
    const auto& lv = std::get<LinearFuzzyNumber>(v);
    if (auto lu = to_linear(*su)) return linear_pair(*lu, lv);
    return certified_graph(*su, lv, kind, slab, tol);
  }
  const auto& lu = std::get<LinearFuzzyNumber>(u);
  if (const auto* sv = std::get_if<StepFuzzySet>(&v)) {
    if (auto lv = to_linear(*sv)) return linear_pair(lu, *lv);
    return certified_graph(*sv, lu, kind, slab, tol);
  }
  return linear_pair(lu, std::get<LinearFuzzyNumber>(v));
}

}  // namespace detail

/// H_end (SUM) or H'_end (MAX).
inline MetricResult h_end(const FuzzySet& u, const FuzzySet& v, ProductMetricKind kind,
                          double tol = kDefaultCertifiedTolerance) {
  return detail::graph_metric(u, v, kind, true, tol, "h_end");
}

/// H_send (SUM) or H'_send (MAX).
inline MetricResult h_send(const FuzzySet& u, const FuzzySet& v, ProductMetricKind kind,
                           double tol = kDefaultCertifiedTolerance) {
  return detail::graph_metric(u, v, kind, false, tol, "h_send");
}

// ---------------------------------------------------------------------------------------
// Inequality audit

struct AuditEntry {
  std::string name;
  double lhs;
  double rhs;
  double slack;
  bool pass;
  bool equality_case;
};

struct AuditReport {
  double p;
  MetricResult dp, dinf, hend, hend_max, hsend, hsend_max;
  std::vector<AuditEntry> entries;

  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
  }
  std::size_t violations() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const AuditEntry& e) { return !e.pass; }));
  }
  /// Equality flags on the two lower bounds of d_p by endograph distances, ignoring 0 = 0.
  std::size_t tight_bounds() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const AuditEntry& e) {
      return (e.name == "dp_ge_hend_bound" || e.name == "dp_ge_hendmax_bound") && e.equality_case &&
             e.lhs > kTolerance;
    }));
  }
};

namespace detail {

/// Records lhs >= rhs, where `rhs_fn` maps the (upper end of the) argument to the bound.
template <typename F>
AuditEntry check_ge(std::string name, const MetricResult& lhs, const MetricResult& arg, F&& rhs_fn) {
  const double l = lhs.v();
  const double r = rhs_fn(arg.v());
  const double r_up = rhs_fn(arg.v() + arg.error_bound);
  const double slack = lhs.error_bound + (r_up - r) + kTolerance;
  return {std::move(name), l, r, slack, l + slack >= r, std::abs(l - r) <= slack};
}

}  // namespace detail

inline AuditReport inequality_audit(const FuzzySet& u, const FuzzySet& v, double p,
                                    double tol = kDefaultCertifiedTolerance) {
  require_p(p);
  AuditReport r;
  r.p = p;
  r.dp = d_p(u, v, p, tol);
  r.dinf = d_infty(u, v, tol);
  r.hend = h_end(u, v, ProductMetricKind::sum, tol);
  r.hend_max = h_end(u, v, ProductMetricKind::max, tol);
  r.hsend = h_send(u, v, ProductMetricKind::sum, tol);
  r.hsend_max = h_send(u, v, ProductMetricKind::max, tol);
  auto id = [](double x) { return x; };
  using detail::check_ge;
  r.entries.push_back(check_ge("dinf_ge_hsend", r.dinf, r.hsend, id));
  r.entries.push_back(check_ge("hsend_ge_hend", r.hsend, r.hend, id));
  r.entries.push_back(check_ge("dinf_ge_hsendmax", r.dinf, r.hsend_max, id));
  r.entries.push_back(check_ge("hsendmax_ge_hendmax", r.hsend_max, r.hend_max, id));
  r.entries.push_back(check_ge("dp_ge_hend_bound", r.dp, r.hend,
                               [p](double h) { return std::pow(std::pow(h, p + 1.0) / (p + 1.0), 1.0 / p); }));
  r.entries.push_back(check_ge("dp_ge_hendmax_bound", r.dp, r.hend_max,
                               [p](double h) { return std::pow(h, 1.0 + 1.0 / p); }));
  r.entries.push_back(check_ge("hend_ge_hendmax", r.hend, r.hend_max, id));
  // Upper bounds are recorded as min(...) >= H.
  auto upper = [](std::string name, const MetricResult& big, double big_val, const MetricResult& small) {
    const double slack = big.error_bound * 2.0 + small.error_bound + kTolerance;
    return AuditEntry{std::move(name), big_val, small.v(), slack, big_val + slack >= small.v(),
                      std::abs(big_val - small.v()) <= slack};
  };
  r.entries.push_back(upper("min_2hendmax_1_ge_hend", r.hend_max, std::min(2.0 * r.hend_max.v(), 1.0), r.hend));
  r.entries.push_back(check_ge("hsend_ge_hsendmax", r.hsend, r.hsend_max, id));
  r.entries.push_back(upper("min_2hsendmax_hsendmax1_ge_hsend", r.hsend_max,
                            std::min(2.0 * r.hsend_max.v(), r.hsend_max.v() + 1.0), r.hsend));
  r.entries.push_back(check_ge("dinf_ge_dp", r.dinf, r.dp, id));
  return r;
}

}  // namespace fuzzmetrics

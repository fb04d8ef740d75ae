#pragma once

// Family-level diagnostics behind the compactness characterizations.
//
// Finite families are scanned exactly. Parametric families (those carrying a Generator)
// are probed at their sampled indices: a verdict then compares the full sample with two
// nested sub-samples and is tagged `sampled` — evidence, never proof.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fuzzmetrics/config.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ext_real.hpp"
#include "fuzzmetrics/fuzzy.hpp"
#include "fuzzmetrics/ground_space.hpp"
#include "fuzzmetrics/hausdorff.hpp"
#include "fuzzmetrics/metrics.hpp"

namespace fuzzmetrics {

enum class Evidence { exact, sampled };

inline const char* to_string(Evidence e) { return e == Evidence::exact ? "exact" : "sampled"; }

/// How a parametric family gets refined: `extend` grows the index range (W_n, n ≤ N),
/// `densify` samples a fixed range more finely (u_t, t on a grid).
enum class Refinement { extend, densify };

struct Generator {
  std::string name;
  std::vector<double> indices;  // one per member
  Refinement refinement = Refinement::extend;
};

class Family {
 public:
  static Family make(std::vector<FuzzySet> members, std::optional<Generator> gen = std::nullopt) {
    if (members.empty()) throw domain_error("family must be nonempty");
    const Space s = space_of(members.front());
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (!(space_of(members[i]) == s)) {
        throw usage_error("family member " + std::to_string(i) + " lives in a different space");
      }
    }
    if (gen && gen->indices.size() != members.size()) {
      throw construction_error("generator must list one index per member");
    }
    return Family(std::move(members), std::move(gen));
  }

  const std::vector<FuzzySet>& members() const { return members_; }
  const std::optional<Generator>& generator() const { return gen_; }
  std::size_t size() const { return members_.size(); }
  Space space() const { return space_of(members_.front()); }

  /// Sampled evidence needs at least two nested sub-samples to compare against.
  Evidence evidence() const { return gen_ && members_.size() >= 4 ? Evidence::sampled : Evidence::exact; }

  /// Member positions of the full, coarse and coarsest nested samples.
  std::vector<std::vector<std::size_t>> nested_samples() const {
    std::vector<std::size_t> full(members_.size());
    for (std::size_t i = 0; i < full.size(); ++i) full[i] = i;
    std::vector<std::vector<std::size_t>> out{full};
    if (evidence() == Evidence::exact) return out;
    for (int k = 0; k < 2; ++k) {
      const auto& prev = out.back();
      std::vector<std::size_t> next;
      if (gen_->refinement == Refinement::extend) {
        next.assign(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>((prev.size() + 1) / 2));
      } else {
        for (std::size_t i = 0; i < prev.size(); i += 2) next.push_back(prev[i]);
      }
      out.push_back(std::move(next));
    }
    return out;
  }

 private:
  Family(std::vector<FuzzySet> m, std::optional<Generator> g) : members_(std::move(m)), gen_(std::move(g)) {}
  std::vector<FuzzySet> members_;
  std::optional<Generator> gen_;
};

namespace detail {

/// A quantity observed on nested samples coarsest ⊂ coarse ⊂ full settles unless both
/// refinements grew it and the growth is not decaying (last step > 0.6 of the previous).
/// One isolated jump is attributed to a member near the boundary entering the sample.
inline bool settles(double coarsest, double coarse, double full) {
  if (!std::isfinite(full)) return false;
  const double tol = kTolerance * std::max(1.0, std::abs(full));
  const double inc1 = coarse - coarsest;
  const double inc2 = full - coarse;
  return inc1 <= tol || inc2 <= tol || inc2 <= 0.6 * inc1;
}

inline GroundPoint first_point(const GroundSet& s) {
  switch (s.backend()) {
    case Backend::line: return GroundPoint::line(s.intervals().front().lo);
    case Backend::euclidean: return GroundPoint::euclidean(s.points().front());
    case Backend::matrix: return GroundPoint::matrix(s.matrix_space(), s.indices().front());
    case Backend::product: {
      std::vector<GroundPoint> parts;
      for (const auto& f : s.factors()) parts.push_back(first_point(f));
      return GroundPoint::product(std::move(parts));
    }
  }
  throw usage_error("unknown backend");
}

/// ∫_lo^hi H(cut(u, α - s1), cut(u, α - s2))^p dα, exact.
inline double shifted_power_integral(const FuzzySet& u, double s1, double s2, double lo, double hi, double p) {
  if (!(hi > lo)) return 0.0;
  if (const auto* s = std::get_if<StepFuzzySet>(&u)) {
    return profile_power_integral(step_profile(*s, s1, *s, s2, lo, hi), p);
  }
  const auto& l = std::get<LinearFuzzyNumber>(u);
  return profile_power_integral(linear_profile({&l, s1}, {&l, s2}, lo, hi), p);
}

inline std::vector<double> descending_grid(std::vector<double> g, const char* what) {
  if (g.empty()) throw domain_error(std::string(what) + " grid must be nonempty");
  for (double h : g)
    if (!(h > 0.0 && h <= 1.0)) throw domain_error(std::string(what) + " grid values must lie in (0,1]");
  std::sort(g.begin(), g.end(), std::greater<>());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace detail

/// {2^-1, ..., 2^-12}.
inline std::vector<double> default_h_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 12; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

/// 64 uniform samples in (0,1), each nudged by a fixed irrational fraction of the spacing
/// so that dyadic and decimal breakpoints are avoided.
inline std::vector<double> default_alpha_grid(std::size_t n = 64) {
  std::vector<double> g;
  const double jitter = 0.5 * (std::sqrt(5.0) - 1.0);  // 0.618...
  for (std::size_t k = 0; k < n; ++k) g.push_back((static_cast<double>(k) + jitter) / static_cast<double>(n));
  return g;
}

// ---------------------------------------------------------------------------------------
// p-mean left-continuity modulus

/// ω_p(u,h) = (∫_h^1 H([u]_α, [u]_{α-h})^p dα)^{1/p}.
inline ExtReal omega_p(const FuzzySet& u, double h, double p) {
  require_p(p);
  if (!(h >= 0.0 && h <= 1.0)) throw domain_error("omega_p: h must lie in [0,1]");
  if (h == 0.0 || h == 1.0) return 0.0;
  return std::pow(detail::shifted_power_integral(u, 0.0, h, h, 1.0, p), 1.0 / p);
}

struct ShiftSubadditivity {
  double omega;                 // ω_p(u,h)
  std::vector<double> pieces;   // I_k with shifts kh/N and (k+1)h/N over [h,1]
  double sum;                   // Σ I_k
  double n_max;                 // N · max I_k
  double omega_fine;            // ω_p(u, h/N), which bounds every I_k
  bool holds;
};

/// The telescoping chain ω_p(u,h) ≤ Σ_k I_k ≤ N·max_k I_k, with I_k ≤ ω_p(u,h/N).
inline ShiftSubadditivity shift_subadditivity_check(const FuzzySet& u, double h, int n, double p) {
  require_p(p);
  if (n < 1) throw domain_error("shift_subadditivity_check: N must be >= 1");
  if (!(h > 0.0 && h <= 1.0)) throw domain_error("shift_subadditivity_check: h must lie in (0,1]");
  ShiftSubadditivity r{};
  r.omega = omega_p(u, h, p).value();
  const double step = h / n;
  double mx = 0.0;
  for (int k = 0; k < n; ++k) {
    const double ik =
        std::pow(detail::shifted_power_integral(u, k * step, (k + 1) * step, h, 1.0, p), 1.0 / p);
    r.pieces.push_back(ik);
    r.sum += ik;
    mx = std::max(mx, ik);
  }
  r.n_max = n * mx;
  r.omega_fine = omega_p(u, step, p).value();
  r.holds = r.omega <= r.sum + kTolerance && r.sum <= r.n_max + kTolerance && mx <= r.omega_fine + kTolerance;
  return r;
}

// ---------------------------------------------------------------------------------------
// Equi-left-continuity

struct EquiLeftContinuity {
  bool pass = false;
  double delta = 0.0;             // largest scanned δ with sup_{u, h<δ} ω_p(u,h) < ε
  std::optional<double> coarse_delta, coarsest_delta;
  std::size_t witness_member = 0;  // (u,h) maximizing the modulus over the grid
  double witness_h = 0.0;
  double witness_value = 0.0;
  Evidence evidence = Evidence::exact;
  std::vector<double> h_grid;              // descending
  std::vector<std::vector<double>> moduli;  // member × h
};

namespace detail {

inline std::vector<std::vector<double>> modulus_table(const Family& f, const std::vector<double>& h_grid, double p) {
  std::vector<std::vector<double>> t;
  for (const auto& u : f.members()) {
    std::vector<double> row;
    for (double h : h_grid) row.push_back(omega_p(u, h, p).value());
    t.push_back(std::move(row));
  }
  return t;
}

/// Scans δ ∈ {1} ∪ grid from the top; h_grid descending.
inline double largest_delta(const std::vector<std::vector<double>>& table, const std::vector<std::size_t>& members,
                            const std::vector<double>& h_grid, double eps) {
  std::vector<double> deltas{1.0};
  for (double h : h_grid)
    if (h < 1.0) deltas.push_back(h);
  for (double d : deltas) {
    double sup = 0.0;
    for (auto m : members)
      for (std::size_t j = 0; j < h_grid.size(); ++j)
        if (h_grid[j] < d) sup = std::max(sup, table[m][j]);
    if (sup < eps) return d;
  }
  return 0.0;
}

/// Sampled verdict: δ must be backed by a scanned h below it and must not keep halving
/// as the sample refines.
inline bool sampled_delta_ok(double full, double coarse, double coarsest, double h_min) {
  if (!(full > h_min)) return false;
  auto depth = [](double d) { return d > 0.0 ? -std::log2(d) : kInf; };
  return settles(depth(coarsest), depth(coarse), depth(full));
}

}  // namespace detail

inline EquiLeftContinuity equi_left_continuity(const Family& f, double p, double eps,
                                               std::vector<double> h_grid = default_h_grid()) {
  require_p(p);
  if (!(eps > 0.0)) throw domain_error("equi_left_continuity: epsilon must be positive");
  EquiLeftContinuity r;
  r.h_grid = detail::descending_grid(std::move(h_grid), "h");
  r.moduli = detail::modulus_table(f, r.h_grid, p);
  r.evidence = f.evidence();
  for (std::size_t i = 0; i < r.moduli.size(); ++i)
    for (std::size_t j = 0; j < r.h_grid.size(); ++j)
      if (r.moduli[i][j] > r.witness_value) {
        r.witness_value = r.moduli[i][j];
        r.witness_member = i;
        r.witness_h = r.h_grid[j];
      }
  const auto samples = f.nested_samples();
  r.delta = detail::largest_delta(r.moduli, samples[0], r.h_grid, eps);
  if (r.evidence == Evidence::exact) {
    r.pass = r.delta > 0.0;
  } else {
    r.coarse_delta = detail::largest_delta(r.moduli, samples[1], r.h_grid, eps);
    r.coarsest_delta = detail::largest_delta(r.moduli, samples[2], r.h_grid, eps);
    r.pass = detail::sampled_delta_ok(r.delta, *r.coarse_delta, *r.coarsest_delta, r.h_grid.back());
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Uniform p-mean boundedness

struct UniformBound {
  ExtReal m;                 // max_u d_p(u, anchor^)
  GroundPoint anchor = GroundPoint::line(0.0);
  std::size_t argmax = 0;
  bool bounded = true;
  Evidence evidence = Evidence::exact;
  double pairwise_sup = 0.0;  // L = sup d_p(u,v)
  double probe_m = 0.0;       // M(w) = max_u d_p(u,w)
  double probe_offset = 0.0;  // d_p(u_0, w)
  bool pairwise_le_2m = true;
  bool probe_chain = true;
};

namespace detail {

inline double anchor_mean(const FuzzySet& u, const GroundPoint& anchor, double p) {
  return d_p(u, FuzzySet(singleton(anchor)), p).v();
}

}  // namespace detail

/// M = max_u d_p(u, anchor^), plus the quantitative chain sup d_p(u,v) ≤ 2M and
/// M(w) ≤ L + d_p(u_0, w) for the probe w (default: the anchor itself).
inline UniformBound uniform_p_mean_bounded(const Family& f, double p, const GroundPoint& anchor,
                                           const std::optional<FuzzySet>& probe = std::nullopt) {
  require_p(p);
  require_same_space(anchor.space(), f.space(), "uniform_p_mean_bounded");
  UniformBound r;
  r.anchor = anchor;
  r.evidence = f.evidence();
  const auto& ms = f.members();
  std::vector<double> to_anchor;
  for (const auto& u : ms) to_anchor.push_back(detail::anchor_mean(u, anchor, p));
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (to_anchor[i] > r.m.value()) {
      r.m = to_anchor[i];
      r.argmax = i;
    }
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) r.pairwise_sup = std::max(r.pairwise_sup, d_p(ms[i], ms[j], p).v());
  const FuzzySet w = probe ? *probe : FuzzySet(singleton(anchor));
  for (const auto& u : ms) r.probe_m = std::max(r.probe_m, d_p(u, w, p).v());
  r.probe_offset = d_p(ms.front(), w, p).v();
  r.pairwise_le_2m = r.pairwise_sup <= 2.0 * r.m.value() + kTolerance;
  r.probe_chain = r.probe_m <= r.pairwise_sup + r.probe_offset + kTolerance;
  if (r.evidence == Evidence::sampled) {
    const auto s = f.nested_samples();
    auto sup_over = [&](const std::vector<std::size_t>& idx) {
      double m = 0.0;
      for (auto i : idx) m = std::max(m, to_anchor[i]);
      return m;
    };
    r.bounded = detail::settles(sup_over(s[2]), sup_over(s[1]), sup_over(s[0]));
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Support unions U(α)

struct SupportUnion {
  double alpha;
  std::optional<GroundSet> set;  // absent on product spaces, where unions are not products
  double diameter;
  bool bounded;  // on the line and Euclidean backends bounded ⇔ totally bounded
  Evidence evidence;
};

namespace detail {

inline double union_diameter(const Family& f, const std::vector<std::size_t>& idx, double alpha,
                             std::optional<GroundSet>* out) {
  const auto& ms = f.members();
  if (f.space().backend == Backend::product) {
    // diam ∪_i ∏_k A_ik = max_k diam ∪_i A_ik under the sup metric.
    const std::size_t arity = f.space().factors.size();
    double m = 0.0;
    for (std::size_t k = 0; k < arity; ++k) {
      std::optional<GroundSet> acc;
      for (auto i : idx) {
        const auto& part = cut(ms[i], alpha).factors()[k];
        acc = acc ? set_union(*acc, part) : part;
      }
      m = std::max(m, diameter(*acc).value());
    }
    if (out) out->reset();
    return m;
  }
  std::optional<GroundSet> acc;
  for (auto i : idx) {
    auto c = cut(ms[i], alpha);
    acc = acc ? set_union(*acc, c) : std::move(c);
  }
  const double d = diameter(*acc).value();
  if (out) *out = std::move(acc);
  return d;
}

}  // namespace detail

inline SupportUnion support_union(const Family& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("support_union: alpha must lie in (0,1]");
  SupportUnion r{alpha, std::nullopt, 0.0, true, f.evidence()};
  const auto s = f.nested_samples();
  r.diameter = detail::union_diameter(f, s[0], alpha, &r.set);
  if (r.evidence == Evidence::sampled) {
    r.bounded = detail::settles(detail::union_diameter(f, s[2], alpha, nullptr),
                                detail::union_diameter(f, s[1], alpha, nullptr), r.diameter);
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Greedy ε-nets

struct NetMetric {
  enum class Kind { dp, hend } kind = Kind::dp;
  double p = 1.0;

  double operator()(const FuzzySet& u, const FuzzySet& v) const {
    return kind == Kind::dp ? d_p(u, v, p).v() : h_end(u, v, ProductMetricKind::sum).v();
  }
  std::string name() const { return kind == Kind::dp ? "d_p" : "h_end"; }
};

struct EpsilonNet {
  std::vector<std::size_t> indices;
  bool verified;  // every member within ε of some net member
};

namespace detail {

inline EpsilonNet greedy_net_over(const Family& f, const std::vector<std::size_t>& order, double eps,
                                  const NetMetric& metric) {
  const auto& ms = f.members();
  EpsilonNet net{{}, true};
  for (auto i : order) {
    bool covered = false;
    for (auto j : net.indices)
      if (metric(ms[i], ms[j]) <= eps) {
        covered = true;
        break;
      }
    if (!covered) net.indices.push_back(i);
  }
  for (auto i : order) {
    double best = kInf;
    for (auto j : net.indices) best = std::min(best, metric(ms[i], ms[j]));
    if (best > eps + kTolerance) net.verified = false;
  }
  return net;
}

}  // namespace detail

/// First-fit net: members are scanned in order and kept when farther than ε from every
/// kept member.
inline EpsilonNet greedy_epsilon_net(const Family& f, double eps, const NetMetric& metric) {
  if (!(eps > 0.0)) throw domain_error("greedy_epsilon_net: epsilon must be positive");
  if (metric.kind == NetMetric::Kind::dp) require_p(metric.p);
  return detail::greedy_net_over(f, f.nested_samples().front(), eps, metric);
}

// ---------------------------------------------------------------------------------------
// Compactness report

struct NetRow {
  double eps;
  std::size_t size;
  std::vector<std::size_t> sample_sizes;  // full, coarse, coarsest (sampled families)
  bool bounded;
  bool verified;
};

struct EquiRow {
  double eps;
  bool pass;
  double delta;
  std::optional<double> coarse_delta, coarsest_delta;
};

/// The constant of the uniform-boundedness proof: with L = diam U(h1), x0 ∈ U(h1),
/// M1 = L(1-h1)^{1/p}, h ≤ min(1-h1, h2) with 1/h = N integral and h2 the δ at ε = 1,
/// every u satisfies d_p(u, x0^) < N·M1 + N(N-1)/2.
struct BoundChain {
  bool applicable = false;
  double h1 = 0.0, l = 0.0, m1 = 0.0, h2 = 0.0, h = 0.0;
  long n = 0;
  double tail_max = 0.0;  // max_u (∫_{h1}^1 H([u]_α,{x0})^p)^{1/p}
  double bound = 0.0;
  double observed = 0.0;  // max_u d_p(u, x0^)
  bool holds = true;
};

enum class CheckStatus { holds, violated, inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::holds: return "holds";
    case CheckStatus::violated: return "violated";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ConsistencyCheck {
  std::string name;
  bool premise;
  bool conclusion;
  CheckStatus status;
};

struct FamilyReport {
  double p;
  Evidence evidence;
  std::size_t members;
  std::string metric;
  std::vector<SupportUnion> support;  // on the α-grid
  std::vector<double> h_grid;
  std::vector<std::vector<double>> moduli;
  EquiLeftContinuity equi;  // at the smallest ε
  std::vector<EquiRow> equi_rows;
  UniformBound uniform;
  std::vector<NetRow> nets;
  BoundChain chain;

  bool support_bounded = true;
  bool equi_left_continuous = true;
  bool uniformly_bounded = true;
  bool nets_bounded = true;
  std::vector<ConsistencyCheck> checks;

  /// An implication contradicted by exact evidence can only be a library bug.
  bool library_bug() const {
    return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::violated; });
  }
};

struct ReportOptions {
  std::vector<double> eps_list{0.5};
  std::vector<double> alpha_grid = default_alpha_grid();
  std::vector<double> h_grid = default_h_grid();
  std::optional<GroundPoint> anchor;  // default: a point of the first member's 1-cut
  NetMetric metric;                   // its p is overridden by the report's p for d_p
};

namespace detail {

inline ConsistencyCheck implication(std::string name, bool premise, bool conclusion, Evidence ev) {
  CheckStatus s = CheckStatus::holds;
  if (premise && !conclusion) s = ev == Evidence::exact ? CheckStatus::violated : CheckStatus::inconclusive;
  return {std::move(name), premise, conclusion, s};
}

inline BoundChain bound_chain(const Family& f, double p, const std::vector<SupportUnion>& support,
                              const std::vector<std::vector<double>>& moduli, const std::vector<double>& h_grid) {
  BoundChain best;
  const auto samples = f.nested_samples();
  const double h2 = largest_delta(moduli, samples[0], h_grid, 1.0);
  for (const auto& su : support) {
    if (!(su.alpha < 1.0) || !su.bounded) continue;
    const double h1 = su.alpha;
    // Largest h = 1/N with h ≤ min(1-h1, h2).
    const double cap = std::min(1.0 - h1, h2);
    if (!(cap > 0.0)) continue;
    const long n = static_cast<long>(std::ceil(1.0 / cap - 1e-12));
    if (n > (1L << 20)) continue;
    BoundChain c;
    c.applicable = true;
    c.h1 = h1;
    c.l = su.diameter;
    c.m1 = c.l * std::pow(1.0 - h1, 1.0 / p);
    c.h2 = h2;
    c.n = n;
    c.h = 1.0 / static_cast<double>(n);
    c.bound = static_cast<double>(n) * c.m1 + 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const GroundPoint x0 =
        su.set ? first_point(*su.set) : first_point(cut(f.members().front(), h1));
    const FuzzySet x0hat = singleton(x0);
    for (const auto& u : f.members()) {
      // (∫_{h1}^1 H([u]_α,{x0})^p)^{1/p}: the cut profile against x0^ restricted to (h1,1].
      double tail = 0.0;
      if (const auto* s = std::get_if<StepFuzzySet>(&u)) {
        tail = profile_power_integral(step_profile(*s, 0.0, std::get<StepFuzzySet>(x0hat), 0.0, h1, 1.0), p);
      } else {
        const auto& l = std::get<LinearFuzzyNumber>(u);
        const auto xl = *to_linear(std::get<StepFuzzySet>(x0hat));
        tail = profile_power_integral(linear_profile({&l, 0.0}, {&xl, 0.0}, h1, 1.0), p);
      }
      c.tail_max = std::max(c.tail_max, std::pow(tail, 1.0 / p));
      c.observed = std::max(c.observed, d_p(u, x0hat, p).v());
    }
    c.holds = c.tail_max <= c.m1 + kTolerance && c.observed <= c.bound + kTolerance;
    if (!best.applicable || c.bound < best.bound) best = c;
  }
  return best;
}

}  // namespace detail

inline FamilyReport compactness_report(const Family& f, double p, ReportOptions opt = {}) {
  require_p(p);
  if (opt.eps_list.empty() || opt.alpha_grid.empty() || opt.h_grid.empty()) {
    throw domain_error("compactness_report: grids must be nonempty");
  }
  for (double e : opt.eps_list)
    if (!(e > 0.0)) throw domain_error("compactness_report: epsilon values must be positive");
  NetMetric metric = opt.metric;
  if (metric.kind == NetMetric::Kind::dp) metric.p = p;

  FamilyReport r;
  r.p = p;
  r.evidence = f.evidence();
  r.members = f.size();
  r.metric = metric.name();

  auto alphas = detail::descending_grid(opt.alpha_grid, "alpha");
  std::reverse(alphas.begin(), alphas.end());
  for (double a : alphas) {
    r.support.push_back(support_union(f, a));
    r.support_bounded = r.support_bounded && r.support.back().bounded;
  }

  auto eps_sorted = opt.eps_list;
  std::sort(eps_sorted.begin(), eps_sorted.end());
  r.equi = equi_left_continuity(f, p, eps_sorted.front(), opt.h_grid);
  r.h_grid = r.equi.h_grid;
  r.moduli = r.equi.moduli;
  const auto samples = f.nested_samples();
  for (double e : opt.eps_list) {
    EquiRow row{e, false, detail::largest_delta(r.moduli, samples[0], r.h_grid, e), std::nullopt, std::nullopt};
    if (r.evidence == Evidence::exact) {
      row.pass = row.delta > 0.0;
    } else {
      row.coarse_delta = detail::largest_delta(r.moduli, samples[1], r.h_grid, e);
      row.coarsest_delta = detail::largest_delta(r.moduli, samples[2], r.h_grid, e);
      row.pass = detail::sampled_delta_ok(row.delta, *row.coarse_delta, *row.coarsest_delta, r.h_grid.back());
    }
    r.equi_rows.push_back(row);
    r.equi_left_continuous = r.equi_left_continuous && row.pass;
  }

  const GroundPoint anchor = opt.anchor ? *opt.anchor : detail::first_point(cut(f.members().front(), 1.0));
  r.uniform = uniform_p_mean_bounded(f, p, anchor);
  r.uniformly_bounded = r.uniform.bounded;

  for (double e : opt.eps_list) {
    NetRow row{e, 0, {}, true, true};
    for (const auto& idx : samples) {
      const auto net = detail::greedy_net_over(f, idx, e, metric);
      row.sample_sizes.push_back(net.indices.size());
      row.verified = row.verified && net.verified;
    }
    row.size = row.sample_sizes.front();
    if (r.evidence == Evidence::sampled) {
      row.bounded = detail::settles(static_cast<double>(row.sample_sizes[2]), static_cast<double>(row.sample_sizes[1]),
                                    static_cast<double>(row.sample_sizes[0]));
    }
    r.nets.push_back(std::move(row));
    r.nets_bounded = r.nets_bounded && r.nets.back().bounded;
  }

  // U(h) on the h-grid, for the boundedness implication.
  bool supports_on_h = true;
  for (double h : r.h_grid) supports_on_h = supports_on_h && support_union(f, h).bounded;

  r.chain = detail::bound_chain(f, p, r.support, r.moduli, r.h_grid);

  const Evidence ev = r.evidence;
  r.checks.push_back(detail::implication("supports_and_equi_imply_bounded_nets",
                                         r.support_bounded && r.equi_left_continuous, r.nets_bounded, ev));
  r.checks.push_back(detail::implication("uniform_bound_implies_bounded_supports", r.uniformly_bounded,
                                         supports_on_h, ev));
  const bool some_bounded = std::any_of(r.support.begin(), r.support.end(),
                                        [](const SupportUnion& s) { return s.alpha < 1.0 && s.bounded; });
  r.checks.push_back(detail::implication("equi_and_bounded_support_imply_uniform_bound",
                                         r.equi_left_continuous && some_bounded, r.uniformly_bounded, ev));
  // The explicit constant is computed on the members themselves, so it is always exact.
  r.checks.push_back(detail::implication("uniform_bound_constant", r.chain.applicable, r.chain.holds,
                                         Evidence::exact));
  r.checks.push_back(detail::implication("pairwise_le_twice_uniform_bound", true, r.uniform.pairwise_le_2m,
                                         Evidence::exact));
  r.checks.push_back(detail::implication("probe_chain", true, r.uniform.probe_chain, Evidence::exact));
  bool nets_ok = true;
  for (const auto& n : r.nets) nets_ok = nets_ok && n.verified;
  r.checks.push_back(detail::implication("net_soundness", true, nets_ok, Evidence::exact));
  return r;
}

// ---------------------------------------------------------------------------------------
// Convergence reports

enum class ColumnTrend { zero, constant, pending, nonzero };

inline const char* to_string(ColumnTrend t) {
  switch (t) {
    case ColumnTrend::zero: return "zero";
    case ColumnTrend::constant: return "constant";
    case ColumnTrend::pending: return "pending";
    case ColumnTrend::nonzero: return "nonzero";
  }
  return "?";
}

struct ConvergenceRow {
  double n;  // generator index, or the 1-based position
  double hend, dp, dinf;
  std::vector<double> cutwise;  // per α sample
  double dpe_bound;             // (h_end^{p+1}/(p+1))^{1/p}
};

struct ConvergenceReport {
  double p;
  std::vector<double> alphas;
  std::vector<ConvergenceRow> rows;
  ColumnTrend hend_trend, dp_trend, dinf_trend;
  std::vector<ColumnTrend> cut_trends;
  CheckStatus aec;          // h_end → 0 ⇔ every sampled cutwise H → 0
  CheckStatus dp_implies_hend;
  bool dpe_all;             // d_p ≥ (h_end^{p+1}/(p+1))^{1/p} at every n
};

namespace detail {

/// A finite column "tends to 0" when its last value is below a tenth of its peak. A column
/// that has not got there but never increases is still pending (constant if it never moved):
/// finitely many terms cannot rule out a later drop.
inline ColumnTrend trend(const std::vector<double>& col) {
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  const double peak = *hi;
  if (col.back() <= std::max(kTolerance, 0.1 * peak)) return ColumnTrend::zero;
  if (peak - *lo <= kTolerance) return ColumnTrend::constant;
  for (std::size_t i = 1; i < col.size(); ++i)
    if (col[i] > col[i - 1] + kTolerance) return ColumnTrend::nonzero;
  return ColumnTrend::pending;
}

}  // namespace detail

inline ConvergenceReport convergence_report(const Family& seq, const FuzzySet& u, double p,
                                            std::vector<double> alphas = default_alpha_grid()) {
  require_p(p);
  require_same_space(seq.space(), space_of(u), "convergence_report");
  if (alphas.empty()) throw domain_error("convergence_report: alpha samples must be nonempty");
  std::vector<double> bps = breakpoints(u);
  for (const auto& m : seq.members()) {
    auto b = breakpoints(m);
    bps.insert(bps.end(), b.begin(), b.end());
  }
  if (const auto* l = std::get_if<LinearFuzzyNumber>(&u)) bps.push_back(l->knots().front().alpha);
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw domain_error("convergence_report: alpha samples must lie in (0,1)");
    for (double b : bps)
      if (std::abs(a - b) <= 1e-12) {
        throw domain_error("convergence_report: alpha sample " + std::to_string(a) + " hits breakpoint " +
                           std::to_string(b));
      }
  }
  ConvergenceReport r{};
  r.p = p;
  r.alphas = alphas;
  std::vector<GroundSet> ucuts;
  for (double a : alphas) ucuts.push_back(cut(u, a));
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto& un = seq.members()[n];
    const double idx = seq.generator() ? seq.generator()->indices[n] : static_cast<double>(n + 1);
    ConvergenceRow row{idx, h_end(un, u, ProductMetricKind::sum).v(), d_p(un, u, p).v(), d_infty(un, u).v(), {}, 0.0};
    for (std::size_t k = 0; k < alphas.size(); ++k) row.cutwise.push_back(hausdorff(cut(un, alphas[k]), ucuts[k]).value());
    row.dpe_bound = std::pow(std::pow(row.hend, p + 1.0) / (p + 1.0), 1.0 / p);
    r.rows.push_back(std::move(row));
  }
  auto column = [&](auto get) {
    std::vector<double> c;
    for (const auto& row : r.rows) c.push_back(get(row));
    return detail::trend(c);
  };
  r.hend_trend = column([](const ConvergenceRow& x) { return x.hend; });
  r.dp_trend = column([](const ConvergenceRow& x) { return x.dp; });
  r.dinf_trend = column([](const ConvergenceRow& x) { return x.dinf; });
  bool all_zero = true, any_nonzero = false;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    r.cut_trends.push_back(column([k](const ConvergenceRow& x) { return x.cutwise[k]; }));
    all_zero = all_zero && r.cut_trends.back() == ColumnTrend::zero;
    any_nonzero = any_nonzero || r.cut_trends.back() == ColumnTrend::nonzero;  // constant/pending stay open
  }
  const bool hend_zero = r.hend_trend == ColumnTrend::zero;
  if (hend_zero == all_zero) {
    r.aec = CheckStatus::holds;
  } else if (hend_zero && !any_nonzero) {
    r.aec = CheckStatus::inconclusive;
  } else {
    r.aec = CheckStatus::violated;
  }
  r.dp_implies_hend = r.dp_trend != ColumnTrend::zero || hend_zero ? CheckStatus::holds : CheckStatus::violated;
  r.dpe_all = std::all_of(r.rows.begin(), r.rows.end(),
                          [](const ConvergenceRow& x) { return x.dp + kTolerance >= x.dpe_bound; });
  return r;
}

}  // namespace fuzzmetrics

// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzmetrics/fixtures.hpp"
#include "fuzzmetrics/fuzzmetrics.hpp"
#include "oracles.hpp"

using namespace fuzzmetrics;
namespace fx = fuzzmetrics::fixtures;

namespace {

constexpr auto SUM = ProductMetricKind::sum;
constexpr auto MAX = ProductMetricKind::max;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Collects the first few failure messages of a criterion.
struct Check {
  int failures = 0;
  std::string first;
  std::string note;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

const AuditEntry* entry(const AuditReport& a, const std::string& name) {
  for (const auto& e : a.entries)
    if (e.name == name) return &e;
  return nullptr;
}

// Random step sets of every backend; products pair a Euclidean and a matrix factor.
struct Backends {
  fx::Rng rng;
  MatrixSpacePtr m;
  explicit Backends(unsigned seed) : rng(seed), m(fx::random_matrix_space(rng, 6)) {}

  static constexpr const char* names[] = {"line", "euclidean", "matrix", "product"};

  FuzzySet make(int backend) {
    switch (backend) {
      case 0: return fx::random_line_step(rng);
      case 1: return fx::random_euclidean_step(rng);
      case 2: return fx::random_matrix_step(rng, m);
      default: return fx::random_product_step(rng, m);
    }
  }

  GroundSet set(int backend) {
    switch (backend) {
      case 0: return fx::random_intervals(rng, 3, -2.0, 2.0);
      case 1: return fx::random_points(rng, 2, 4, 2.0);
      case 2: return fx::random_indices(rng, m, 3);
      default: return GroundSet::product({fx::random_points(rng, 1, 3, 2.0), fx::random_indices(rng, m, 3)});
    }
  }
};

// ---------------------------------------------------------------------------------------

Check worked_examples_ecn() {
  Check c;
  const auto e = fx::ecn();
  for (double p : {1.0, 2.0, 3.0}) {
    const auto r = d_p(e.u, e.v, p);
    const double want = std::pow(std::pow(0.5, p + 1) / (p + 1), 1 / p);
    c.expect(r.exact, "d_p not exact at p=" + fmt(p));
    c.expect(std::abs(r.v() - want) <= 1e-9, "d_p=" + fmt(r.v()) + " want " + fmt(want));
    const auto a = inequality_audit(e.u, e.v, p);
    const auto* dpe = entry(a, "dp_ge_hend_bound");
    c.expect(dpe && dpe->equality_case && dpe->pass, "dp_ge_hend_bound equality not flagged at p=" + fmt(p));
  }
  const double he = h_end(e.u, e.v, SUM).v();
  c.expect(std::abs(he - 0.5) <= 1e-9, "H_end=" + fmt(he));
  return c;
}

Check worked_examples_eym() {
  Check c;
  const auto e = fx::eym();
  for (double p : {1.0, 2.0, 3.0}) {
    const double d = d_p(e.u, e.v, p).v(), want = std::pow(0.5, 1 + 1 / p);
    c.expect(std::abs(d - want) <= 1e-9, "d_p=" + fmt(d) + " want " + fmt(want));
    const auto a = inequality_audit(e.u, e.v, p);
    const auto* dpe = entry(a, "dp_ge_hendmax_bound");
    c.expect(dpe && dpe->equality_case && dpe->pass, "dp_ge_hendmax_bound equality not flagged at p=" + fmt(p));
  }
  const double he = h_end(e.u, e.v, MAX).v();
  c.expect(std::abs(he - 0.5) <= 1e-9, "H'_end=" + fmt(he));
  return c;
}

Check audit_random_pairs() {
  Check c;
  Backends b(101);
  int audited = 0;
  for (int backend = 0; backend < 4; ++backend)
    for (int i = 0; i < 1000; ++i) {
      const FuzzySet u = b.make(backend), v = b.make(backend);
      for (double p : {1.0, 2.0}) {
        const auto a = inequality_audit(u, v, p);
        const double err = a.dp.error_bound + a.dinf.error_bound + a.hend.error_bound + a.hend_max.error_bound +
                           a.hsend.error_bound + a.hsend_max.error_bound;
        for (const auto& e : a.entries) {
          c.expect(e.pass, std::string(Backends::names[backend]) + " " + e.name + ": " + fmt(e.lhs) + " < " + fmt(e.rhs));
          c.expect(e.slack <= err + 1e-9, e.name + " slack " + fmt(e.slack));
        }
        ++audited;
      }
    }
  c.note = std::to_string(audited) + " audits";
  return c;
}

Check product_identity() {
  Check c;
  Backends b(202);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int len = fx::uniform_int(b.rng, 1, 4);
    std::vector<GroundSet> as, bs;
    double hmax = 0.0;
    for (int j = 0; j < len; ++j) {
      const int backend = fx::uniform_int(b.rng, 0, 2);
      as.push_back(b.set(backend));
      bs.push_back(b.set(backend));
      hmax = std::max(hmax, hausdorff(as.back(), bs.back()).value());
    }
    const double h = hausdorff_product(as, bs).value();
    const double brute = oracle::product_hausdorff_brute(as, bs, 1e-3);
    worst = std::max(worst, std::abs(h - brute));
    c.expect(std::abs(h - brute) <= 1e-3, "brute " + fmt(brute) + " vs " + fmt(h));
    c.expect(std::abs(h - hmax) <= 1e-12, "component max " + fmt(hmax) + " vs " + fmt(h));
  }
  c.note = "max |exact - brute| = " + fmt(worst);
  return c;
}

// Every breakpoint sits a third of the way into its cell at both N = 10^3 and N = 10^4,
// so the midpoint-rule error scales exactly with the cell width.
StepFuzzySet lattice_step(fx::Rng& rng) {
  const int k = fx::uniform_int(rng, 1, 4);
  std::vector<double> alphas;
  for (int i = 0; i + 1 < k; ++i) alphas.push_back((fx::uniform_int(rng, 0, 998) + 1.0 / 3.0) / 1000.0);
  alphas.push_back(1.0);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::vector<Level> levels(alphas.size(), Level{1.0, GroundSet::interval(0, 0)});
  GroundSet cur = fx::random_intervals(rng, 2, -2.0, 2.0);
  for (std::size_t i = alphas.size(); i-- > 0;) {
    if (i + 1 < alphas.size()) cur = set_union(cur, fx::random_intervals(rng, 2, -3.0, 3.0));
    levels[i] = {alphas[i], cur};
  }
  return make_step(std::move(levels));
}

Check midpoint_oracle() {
  Check c;
  fx::Rng rng(303);
  double cmin = kInf, cmax = 0.0;
  int plateaus = 0;
  for (int i = 0; i < 200; ++i) {
    const FuzzySet u = lattice_step(rng), v = lattice_step(rng);
    const double p = 1.0 + i % 3;
    const double d = d_p(u, v, p).v();
    const double e3 = std::abs(d - oracle::riemann_dp(u, v, p, 1000));
    const double e4 = std::abs(d - oracle::riemann_dp(u, v, p, 10000));
    if (e3 < 1e-12 && e4 < 1e-12) {
      ++plateaus;
      continue;
    }
    const double ratio = e3 / e4;
    c.expect(ratio >= 8.0 && ratio <= 12.0, "ratio " + fmt(ratio) + " (" + fmt(e3) + ", " + fmt(e4) + ")");
    cmin = std::min(cmin, e4 * 1e4);
    cmax = std::max(cmax, e4 * 1e4);
  }
  // Generic breakpoints: the error is still bounded by C/N with C = Σ|jumps of H^p|/2.
  fx::Rng g(304);
  double excess = -kInf;
  for (int i = 0; i < 200; ++i) {
    const FuzzySet u = fx::random_line_step(g), v = fx::random_line_step(g);
    const double p = 1.0 + i % 2;
    const double ip = std::pow(d_p(u, v, p).v(), p);
    auto bps = breakpoints(u);
    const auto bv = breakpoints(v);
    bps.insert(bps.end(), bv.begin(), bv.end());
    double jumps = 0.0;
    for (double b : bps) {
      if (!(b > 0.0 && b < 1.0)) continue;
      const double lo = hausdorff(cut(u, b), cut(v, b)).value();
      const double hi = hausdorff(cut(u, std::nextafter(b, 1.0)), cut(v, std::nextafter(b, 1.0))).value();
      jumps += std::abs(std::pow(hi, p) - std::pow(lo, p));
    }
    for (long n : {1000L, 10000L}) {
      const double err = std::abs(ip - std::pow(oracle::riemann_dp(u, v, p, n), p));
      excess = std::max(excess, err - jumps / (2.0 * n));
      // Breakpoints on cell midpoints attain the bound, so only roundoff separates the two.
      c.expect(err <= jumps / (2.0 * n) + 1e-9,
               "generic pair exceeds C/N at N=" + std::to_string(n) + ": " + fmt(err) + " > " + fmt(jumps / (2.0 * n)));
    }
  }
  c.note = "C in [" + fmt(cmin) + ", " + fmt(cmax) + "], " + std::to_string(plateaus) + " plateaus, generic excess over C/N " + fmt(excess);
  return c;
}

Check endograph_oracle() {
  Check c;
  double worst = 0.0;
  auto compare = [&](const std::string& name, double exact, double grid) {
    c.expect(exact + 1e-12 >= grid, name + ": exact " + fmt(exact) + " below grid " + fmt(grid));
    c.expect(exact - grid <= 1e-3, name + ": exact " + fmt(exact) + " exceeds grid " + fmt(grid));
    worst = std::max(worst, exact - grid);
  };
  for (const auto& pair : fx::pack())
    for (auto kind : {SUM, MAX}) {
      const double exact = h_end(pair.u, pair.v, kind).v();
      if (kind == SUM) c.expect(exact <= 1.0, pair.name + " H_end > 1");
      const auto* lu = std::get_if<LinearFuzzyNumber>(&pair.u);
      const auto* lv = std::get_if<LinearFuzzyNumber>(&pair.v);
      const double grid = lu && lv ? oracle::linear_end_grid(*lu, *lv, kind, 1e-4, 1e-4)
                                   : oracle::step_end_grid(std::get<StepFuzzySet>(pair.u), std::get<StepFuzzySet>(pair.v),
                                                           kind, 1e-4);
      compare(pair.name, exact, grid);
    }
  Backends b(404);
  for (int i = 0; i < 100; ++i) {
    const int backend = i % 4;
    const FuzzySet u = b.make(backend), v = b.make(backend);
    for (auto kind : {SUM, MAX}) {
      const double exact = h_end(u, v, kind).v();
      if (kind == SUM) c.expect(exact <= 1.0, "random H_end > 1");
      compare(Backends::names[backend],
              exact, oracle::step_end_grid(std::get<StepFuzzySet>(u), std::get<StepFuzzySet>(v), kind, 1e-4));
    }
  }
  c.note = "max exact - grid = " + fmt(worst);
  return c;
}

Check cut_monotonicity() {
  Check c;
  Backends b(505);
  for (int i = 0; i < 1000; ++i) {
    const int backend = i % 4;
    const FuzzySet u = b.make(backend);
    const auto pts = oracle::samples(cut(u, 0.0), 0.25);
    const GroundPoint& x = pts[static_cast<std::size_t>(fx::uniform_int(b.rng, 0, static_cast<int>(pts.size()) - 1))];
    const GroundSet xs = GroundSet::singleton(x);
    auto grid = breakpoints(u);
    for (double a : fx::random_alphas(b.rng, 6)) grid.push_back(a);
    grid.push_back(0.0);
    std::vector<double> merged;
    for (double a : grid) {
      merged.push_back(a);
      if (a < 1.0) merged.push_back(std::nextafter(a, 1.0));
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    double prev = kInf;
    for (double a : merged) {
      const double h = hausdorff(cut(u, a), xs).value();
      c.expect(h <= prev, "H increases at alpha=" + fmt(a));
      prev = h;
    }
  }
  return c;
}

Check divergence_fixture() {
  Check c;
  const FuzzySet origin = singleton(GroundPoint::line(0.0));
  double prev = -kInf;
  for (int k = 1; k <= 50; ++k) {
    const double d = d_p(FuzzySet(fx::pefium(k)), origin, 1).v();
    c.expect(std::abs(d - fx::pefium_d1(k)) <= 1e-9, "K=" + std::to_string(k) + ": " + fmt(d));
    c.expect(d > prev, "not increasing at K=" + std::to_string(k));
    prev = d;
  }
  c.note = "d_1(u_50) = " + fmt(prev);
  return c;
}

Check compactness() {
  Check c;
  const NetMetric d1{NetMetric::Kind::dp, 1.0};
  c.expect(!equi_left_continuity(fx::w_family(50), 1, 0.5).pass, "W family passes equi-left-continuity");
  std::size_t prev = 0;
  std::string sizes;
  for (int n : {5, 10, 20, 40, 50}) {
    const auto s = greedy_epsilon_net(fx::w_family(n), 0.5, d1).indices.size();
    c.expect(s > prev, "W net does not grow at n=" + std::to_string(n));
    sizes += std::to_string(s) + " ";
    prev = s;
  }
  const auto ut = fx::ut_family(0.01);
  c.expect(equi_left_continuity(ut, 1, 0.05).pass, "u_t family fails equi-left-continuity");
  for (double step : {0.01, 0.02}) {
    const auto f = fx::ut_family(step);
    const auto& g = f.generator()->indices;
    const double range = g.back() - g.front();
    for (double eps : {0.1, 0.2, 0.25, 0.5}) {
      const auto net = greedy_epsilon_net(f, eps, d1);
      const double want = std::ceil(range / eps);
      c.expect(net.verified && std::abs(static_cast<double>(net.indices.size()) - want) <= 1.0,
               "u_t net at step " + fmt(step) + ", eps " + fmt(eps) + ": " + std::to_string(net.indices.size()));
    }
  }
  const auto& g = ut.generator()->indices;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const double d = d_p(ut.members()[i], ut.members()[j], 1).v();
      c.expect(std::abs(d - std::abs(g[i] - g[j])) <= 1e-9, "d_1(u_s,u_t) = " + fmt(d));
    }
  c.note = "W nets " + sizes;
  return c;
}

Check convergence() {
  Check c;
  const auto s = fx::shrinking_jump(256);
  const auto r = convergence_report(s.seq, s.limit, 1);
  for (const auto& row : r.rows) {
    c.expect(row.hend <= 2.0 / row.n + 1e-12, "h_end > 2/n at n=" + fmt(row.n));
    c.expect(row.dinf == 1.0, "d_inf != 1 at n=" + fmt(row.n));
  }
  c.expect(r.hend_trend == ColumnTrend::zero, std::string("h_end trend ") + to_string(r.hend_trend));
  c.expect(r.alphas.size() == 64, "expected 64 alpha samples");
  for (std::size_t k = 0; k < r.cut_trends.size(); ++k)
    c.expect(r.cut_trends[k] == ColumnTrend::zero, "cut at alpha=" + fmt(r.alphas[k]) + " " + to_string(r.cut_trends[k]));
  c.expect(r.aec == CheckStatus::holds, "aec not confirmed");
  for (double p : {1.0, 2.0}) {
    const auto w = fx::uniform_shrink(64);
    const auto q = convergence_report(w.seq, w.limit, p);
    c.expect(q.dp_trend == ColumnTrend::zero && q.hend_trend == ColumnTrend::zero, "uniform shrink does not converge");
    c.expect(q.dp_implies_hend == CheckStatus::holds, "d_p -> 0 does not force h_end -> 0");
    for (const auto& row : q.rows) c.expect(row.dp >= row.dpe_bound - 1e-12, "dpe bound broken at n=" + fmt(row.n));
  }
  return c;
}

Check metric_axioms() {
  Check c;
  Backends b(606);
  using Metric = std::function<double(const FuzzySet&, const FuzzySet&)>;
  const std::vector<std::pair<std::string, Metric>> metrics{
      {"d_1", [](auto& x, auto& y) { return d_p(x, y, 1).v(); }},
      {"d_2", [](auto& x, auto& y) { return d_p(x, y, 2).v(); }},
      {"d_inf", [](auto& x, auto& y) { return d_infty(x, y).v(); }},
      {"h_end", [](auto& x, auto& y) { return h_end(x, y, SUM).v(); }},
      {"h_end_max", [](auto& x, auto& y) { return h_end(x, y, MAX).v(); }},
  };
  for (int backend = 0; backend < 4; ++backend)
    for (int i = 0; i < 1000; ++i) {
      const FuzzySet u = b.make(backend), v = b.make(backend), w = b.make(backend);
      for (const auto& [name, f] : metrics)
        c.expect(f(u, w) <= f(u, v) + f(v, w) + 1e-9, std::string(Backends::names[backend]) + " " + name);
      const GroundSet x = b.set(backend), y = b.set(backend), z = b.set(backend);
      c.expect(hausdorff(x, z).value() <= hausdorff(x, y).value() + hausdorff(y, z).value() + 1e-9,
               std::string(Backends::names[backend]) + " H");
    }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Check (*)()>> criteria{
      {"ecn example", worked_examples_ecn},
      {"eym example", worked_examples_eym},
      {"inequality audit", audit_random_pairs},
      {"product identity", product_identity},
      {"exact integration vs midpoint rule", midpoint_oracle},
      {"endograph oracle", endograph_oracle},
      {"cut monotonicity", cut_monotonicity},
      {"divergence fixture", divergence_fixture},
      {"compactness diagnostics", compactness},
      {"convergence evidence", convergence},
      {"metric axioms", metric_axioms},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s (%.2fs)%s%s%s%s\n", c.failures ? "FAIL" : "PASS", i + 1, criteria[i].first, secs,
                c.note.empty() ? "" : " -- ", c.note.c_str(), c.failures ? " -- " : "", c.first.c_str());
    failed += c.failures ? 1 : 0;
  }
  return failed ? 1 : 0;
}

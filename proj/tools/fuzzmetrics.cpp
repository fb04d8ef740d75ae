// fuzzmetrics — command-line front end.
//
// Exit codes: 0 ok, 2 malformed input, 3 domain/usage error, 4 an inequality or
// implication failed (a library bug, by contract).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzzmetrics/fuzzmetrics.hpp"

namespace fm = fuzzmetrics;
namespace fx = fuzzmetrics::fixtures;
using fm::io::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitViolation = 4;

struct Config {
  std::vector<std::string> inputs;
  std::vector<std::string> metrics;
  std::vector<double> ps;
  std::vector<double> eps{0.5};
  std::vector<double> alpha_grid;
  std::vector<double> h_grid;
  std::optional<double> tol;
  std::string format;  // default: text for dist, json otherwise
  std::string out;
  std::string fixture;
  std::string backend = "all";
  std::string net_metric = "dp";
  std::string member;
  std::uint64_t seed = 1;
  int random = 0;
  int k = 20;
  int n = 50;
  int big_n = 64;
  double t_step = 0.01;
  bool sets = false;
  bool fixtures = false;
};

double tolerance(const Config& c) {
  if (c.tol) {
    if (!(*c.tol > 0.0)) throw fm::domain_error("--tol must be positive");
    return *c.tol;
  }
  if (const char* env = std::getenv("FUZZMETRICS_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || !(v > 0.0)) throw fm::parse_error("FUZZMETRICS_TOL must be a positive number");
    return v;
  }
  return fm::kDefaultCertifiedTolerance;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    fm::io::write_text(c.out, text);
  }
}

std::string show(double x) {
  std::ostringstream os;
  os.precision(12);
  os << fm::ExtReal(x);
  return os.str();
}

// --- dist ------------------------------------------------------------------------------

int cmd_dist(const Config& c) {
  if (c.inputs.size() != 2) throw fm::usage_error("dist needs exactly two input files");
  const double tol = tolerance(c);
  json out = json::object();
  std::ostringstream text;
  if (c.sets) {
    const auto a = fm::io::set_from_json(fm::io::read_json(c.inputs[0]), c.inputs[0]);
    const auto b = fm::io::set_from_json(fm::io::read_json(c.inputs[1]), c.inputs[1]);
    for (const auto& m : c.metrics.empty() ? std::vector<std::string>{"hausdorff"} : c.metrics) {
      double v;
      if (m == "hausdorff") v = fm::hausdorff(a, b).value();
      else if (m == "hausdorff_pre") v = fm::hausdorff_pre(a, b).value();
      else throw fm::domain_error("metric " + m + " is not defined on sets");
      out[m] = {{"value", fm::io::detail::number(v)}, {"exact", true}, {"error_bound", 0.0}};
      text << m << ' ' << show(v) << " exact\n";
    }
  } else {
    const auto u = fm::io::fuzzy_from_json(fm::io::read_json(c.inputs[0]), c.inputs[0]);
    const auto v = fm::io::fuzzy_from_json(fm::io::read_json(c.inputs[1]), c.inputs[1]);
    const double p = c.ps.empty() ? 1.0 : c.ps.front();
    std::vector<std::string> metrics = c.metrics;
    if (metrics.empty()) metrics = {"dp", "dinf", "hend", "hendmax", "hsend", "hsendmax"};
    for (const auto& m : metrics) {
      fm::MetricResult r;
      using K = fm::ProductMetricKind;
      if (m == "dp") r = fm::d_p(u, v, p, tol);
      else if (m == "dinf") r = fm::d_infty(u, v, tol);
      else if (m == "hend") r = fm::h_end(u, v, K::sum, tol);
      else if (m == "hendmax") r = fm::h_end(u, v, K::max, tol);
      else if (m == "hsend") r = fm::h_send(u, v, K::sum, tol);
      else if (m == "hsendmax") r = fm::h_send(u, v, K::max, tol);
      else if (m == "hausdorff") throw fm::domain_error("hausdorff needs --sets");
      else throw fm::domain_error("unknown metric " + m);
      out[m] = fm::io::metric_to_json(r);
      text << m << ' ' << show(r.v()) << (r.exact ? " exact" : " certified ±" + show(r.error_bound)) << '\n';
    }
  }
  emit(c, c.format == "json" ? out.dump(2) : text.str());
  return 0;
}

// --- audit -----------------------------------------------------------------------------

std::vector<fx::NamedPair> pairs_from_path(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw fm::parse_error(path + ": no .json pair files");
  } else {
    files.push_back(path);
  }
  std::vector<fx::NamedPair> out;
  for (const auto& f : files) {
    const auto j = fm::io::read_json(f);
    out.push_back({f, fm::io::fuzzy_from_json(fm::io::detail::field(j, "u", f), f + ".u"),
                   fm::io::fuzzy_from_json(fm::io::detail::field(j, "v", f), f + ".v")});
  }
  return out;
}

std::vector<fx::NamedPair> random_pairs(const Config& c) {
  fx::Rng rng(c.seed);
  std::vector<std::string> backends{"line", "euclidean", "matrix", "product"};
  if (c.backend != "all") backends = {c.backend};
  std::vector<fx::NamedPair> out;
  for (const auto& b : backends) {
    const auto m = fx::random_matrix_space(rng);
    auto draw = [&]() -> fm::StepFuzzySet {
      if (b == "line") return fx::random_line_step(rng);
      if (b == "euclidean") return fx::random_euclidean_step(rng);
      if (b == "matrix") return fx::random_matrix_step(rng, m);
      if (b == "product") return fx::random_product_step(rng, m);
      throw fm::domain_error("unknown backend " + b);
    };
    for (int i = 0; i < c.random; ++i) {
      auto u = draw();
      auto v = draw();
      out.push_back({b + "#" + std::to_string(i), u, v});
    }
  }
  return out;
}

int cmd_audit(const Config& c) {
  const double tol = tolerance(c);
  std::vector<fx::NamedPair> pairs;
  if (c.fixtures) pairs = fx::pack();
  for (const auto& in : c.inputs) {
    auto more = pairs_from_path(in);
    pairs.insert(pairs.end(), more.begin(), more.end());
  }
  if (c.random > 0) {
    auto more = random_pairs(c);
    pairs.insert(pairs.end(), more.begin(), more.end());
  }
  if (pairs.empty()) throw fm::parse_error("audit: nothing to audit (give files, --fixtures or --random N)");
  const std::vector<double> ps = c.ps.empty() ? std::vector<double>{1.0, 2.0, 3.0} : c.ps;
  json rows = json::array();
  std::ostringstream csv;
  csv << "pair,p,inequality,lhs,rhs,slack,pass,equality\n";
  std::size_t violations = 0;
  std::set<std::string> flagged;  // distinct (pair, inequality)
  for (const auto& pr : pairs) {
    for (double p : ps) {
      const auto r = fm::inequality_audit(pr.u, pr.v, p, tol);
      violations += r.violations();
      auto j = fm::io::audit_to_json(r);
      j["pair"] = pr.name;
      rows.push_back(std::move(j));
      for (const auto& e : r.entries)
        if ((e.name == "dp_ge_hend_bound" || e.name == "dp_ge_hendmax_bound") && e.equality_case && e.lhs > fm::kTolerance)
          flagged.insert(pr.name + "/" + e.name);
      for (const auto& e : r.entries)
        csv << pr.name << ',' << p << ',' << e.name << ',' << show(e.lhs) << ',' << show(e.rhs) << ',' << e.slack
            << ',' << e.pass << ',' << e.equality_case << '\n';
    }
  }
  const std::size_t flags = flagged.size();
  json out{{"pairs", pairs.size()}, {"violations", violations}, {"equality_flags", flags}, {"audits", rows}};
  emit(c, c.format == "csv" ? csv.str() : out.dump(2));
  std::cerr << "audited " << pairs.size() << " pairs: " << violations << " violations, " << flags
            << " equality flags\n";
  return violations == 0 ? 0 : kExitViolation;
}

// --- fixtures --------------------------------------------------------------------------

json fixture_json(const Config& c) {
  const auto& name = c.fixture;
  auto pair = [&](const fx::NamedPair& p) -> json {
    if (c.member == "u") return fm::io::fuzzy_to_json(p.u);
    if (c.member == "v") return fm::io::fuzzy_to_json(p.v);
    return {{"u", fm::io::fuzzy_to_json(p.u)}, {"v", fm::io::fuzzy_to_json(p.v)}};
  };
  auto sequence = [](const fx::Sequence& s) -> json {
    return {{"name", s.name}, {"sequence", fm::io::family_to_json(s.seq)}, {"limit", fm::io::fuzzy_to_json(s.limit)}};
  };
  if (name == "ecn") return pair(fx::ecn());
  if (name == "eym") return pair(fx::eym());
  if (name == "singletons") return pair(fx::singletons());
  if (name == "products") return pair(fx::products());
  if (name == "pefium") return fm::io::family_to_json(fx::pefium_family(c.k));
  if (name == "W") return fm::io::family_to_json(fx::w_family(c.n));
  if (name == "u_t") return fm::io::family_to_json(fx::ut_family(c.t_step));
  if (name == "shrinking-jump") return sequence(fx::shrinking_jump(c.big_n));
  if (name == "uniform-shrink") return sequence(fx::uniform_shrink(c.big_n));
  throw fm::domain_error("unknown fixture " + name +
                         " (ecn, eym, singletons, products, pefium, W, u_t, shrinking-jump, uniform-shrink)");
}

int cmd_fixture(const Config& c) {
  emit(c, fixture_json(c).dump(2));
  return 0;
}

// --- family / converge -----------------------------------------------------------------

fm::ReportOptions report_options(const Config& c) {
  fm::ReportOptions o;
  o.eps_list = c.eps;
  if (!c.alpha_grid.empty()) o.alpha_grid = c.alpha_grid;
  if (!c.h_grid.empty()) o.h_grid = c.h_grid;
  if (c.net_metric == "hend") o.metric.kind = fm::NetMetric::Kind::hend;
  else if (c.net_metric != "dp") throw fm::domain_error("--net-metric must be dp or hend");
  return o;
}

int cmd_family(const Config& c) {
  json j;
  if (!c.fixture.empty()) j = fixture_json(c);
  else if (c.inputs.size() == 1) j = fm::io::read_json(c.inputs[0]);
  else throw fm::usage_error("family needs one family file or --fixture");
  const auto fam = fm::io::family_from_json(j);
  const double p = c.ps.empty() ? 1.0 : c.ps.front();
  const auto r = fm::compactness_report(fam, p, report_options(c));
  emit(c, c.format == "csv" ? fm::io::report_to_csv(r) : fm::io::report_to_json(r).dump(2));
  return r.library_bug() ? kExitViolation : 0;
}

int cmd_converge(const Config& c) {
  json j;
  if (!c.fixture.empty()) j = fixture_json(c);
  else if (c.inputs.size() == 1) j = fm::io::read_json(c.inputs[0]);
  else throw fm::usage_error("converge needs one sequence file or --fixture");
  const auto seq = fm::io::family_from_json(fm::io::detail::field(j, "sequence", "sequence file"));
  const auto lim = fm::io::fuzzy_from_json(fm::io::detail::field(j, "limit", "sequence file"), "limit");
  const double p = c.ps.empty() ? 1.0 : c.ps.front();
  const auto r = fm::convergence_report(seq, lim, p, c.alpha_grid.empty() ? fm::default_alpha_grid() : c.alpha_grid);
  emit(c, c.format == "csv" ? fm::io::convergence_to_csv(r) : fm::io::convergence_to_json(r).dump(2));
  const bool bug = r.aec == fm::CheckStatus::violated || r.dp_implies_hend == fm::CheckStatus::violated || !r.dpe_all;
  return bug ? kExitViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzmetrics: metrics and compactness diagnostics for level-set fuzzy sets"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* s) {
    s->add_option("--p", c.ps, "exponent p >= 1 (repeatable for audit)")->allow_extra_args(false);
    s->add_option("--tol", c.tol, "certified-path tolerance (default: $FUZZMETRICS_TOL or 1e-6)");
    s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    s->add_option("--out", c.out, "write the report to a file instead of stdout");
  };
  auto grids = [&](CLI::App* s) {
    s->add_option("--eps", c.eps, "epsilon values")->delimiter(',')->allow_extra_args(false);
    s->add_option("--alpha-grid", c.alpha_grid, "alpha samples")->delimiter(',')->allow_extra_args(false);
    s->add_option("--h-grid", c.h_grid, "modulus shifts")->delimiter(',')->allow_extra_args(false);
  };
  auto sizes = [&](CLI::App* s) {
    s->add_option("--fixture", c.fixture, "named construction");
    s->add_option("--K", c.k, "pefium truncation size");
    s->add_option("--n", c.n, "W-family size");
    s->add_option("--N", c.big_n, "sequence length");
    s->add_option("--t-step", c.t_step, "u_t grid step");
  };

  auto* dist = app.add_subcommand("dist", "distances between two fuzzy sets (or two sets with --sets)");
  common(dist);
  dist->add_option("--metric", c.metrics, "dp, dinf, hend, hendmax, hsend, hsendmax, hausdorff")
      ->delimiter(',')
      ->allow_extra_args(false);
  dist->add_flag("--sets", c.sets, "inputs are ground sets");
  dist->add_option("inputs", c.inputs, "two JSON files")->expected(2);

  auto* audit = app.add_subcommand("audit", "inequality audit over pairs");
  common(audit);
  audit->add_option("inputs", c.inputs, "pair files ({\"u\":..,\"v\":..}) or directories");
  audit->add_flag("--fixtures", c.fixtures, "include the bundled fixture pack");
  audit->add_option("--random", c.random, "random step-set pairs per backend");
  audit->add_option("--seed", c.seed, "generator seed");
  audit->add_option("--backend", c.backend, "line, euclidean, matrix, product or all");

  auto* family = app.add_subcommand("family", "compactness report for a family");
  common(family);
  grids(family);
  sizes(family);
  family->add_option("--net-metric", c.net_metric, "dp or hend");
  family->add_option("inputs", c.inputs, "family file");

  auto* converge = app.add_subcommand("converge", "convergence report for a sequence");
  common(converge);
  grids(converge);
  sizes(converge);
  converge->add_option("inputs", c.inputs, "sequence file ({\"sequence\":..,\"limit\":..})");

  auto* fixture = app.add_subcommand("fixture", "emit a named construction as JSON");
  common(fixture);
  sizes(fixture);
  fixture->add_option("name", c.fixture, "fixture name")->required();
  fixture->add_option("--member", c.member, "emit only u or v of a pair")->check(CLI::IsMember({"u", "v"}));
  fixture->add_option("--seed", c.seed, "accepted for symmetry; fixtures are deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }
  if (c.format.empty()) c.format = dist->parsed() ? "text" : "json";

  try {
    for (double p : c.ps) fm::require_p(p);
    if (dist->parsed()) return cmd_dist(c);
    if (audit->parsed()) return cmd_audit(c);
    if (family->parsed()) return cmd_family(c);
    if (converge->parsed()) return cmd_converge(c);
    if (fixture->parsed()) return cmd_fixture(c);
  } catch (const fm::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const fm::construction_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitParse;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const fm::tolerance_error& e) {
    std::cerr << "tolerance not reached: " << e.what() << " (best bound " << e.best_bound() << ")\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}

#pragma once

// JSON formats.
//
//   GroundSet   {"backend":"line","intervals":[[a,b],...]}
//               {"backend":"euclidean","dim":m,"points":[[...],...]}
//               {"backend":"matrix","n":N,"D":[[...],...],"indices":[...]}
//               {"backend":"product","factors":[<GroundSet>,...]}
//   step set    {"kind":"step","space":<header>,"levels":[{"alpha":γ,"set":<body>},...]}
//   linear      {"kind":"linear","knots":[{"alpha":γ,"a":a,"b":b},...]}
//   family      {"members":[<fuzzy set>,...],"generator":{"name":..,"indices":[..],"refinement":..}}
//
// A header is a GroundSet without its elements; a body is the elements alone, so a full
// GroundSet object works as either.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fuzzmetrics/diagnostics.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ext_real.hpp"
#include "fuzzmetrics/fuzzy.hpp"
#include "fuzzmetrics/ground_space.hpp"
#include "fuzzmetrics/metrics.hpp"

namespace fuzzmetrics::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw parse_error(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw parse_error(where + ": missing \"" + key + "\"");
  return *it;
}

template <typename T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw parse_error(where + ": " + e.what());
  }
}

inline json number(double x) { return std::isfinite(x) ? json(x) : json("inf"); }

}  // namespace detail

// ---------------------------------------------------------------------------------------
// Spaces and sets

inline json space_to_json(const Space& s) {
  json j;
  j["backend"] = to_string(s.backend);
  switch (s.backend) {
    case Backend::line: break;
    case Backend::euclidean: j["dim"] = s.dim; break;
    case Backend::matrix:
      j["n"] = s.matrix->size();
      j["D"] = s.matrix->rows();
      break;
    case Backend::product:
      j["factors"] = json::array();
      for (const auto& f : s.factors) j["factors"].push_back(space_to_json(f));
      break;
  }
  return j;
}

inline Space space_from_json(const json& j, const std::string& where = "space") {
  const auto backend = detail::get<std::string>(detail::field(j, "backend", where), where + ".backend");
  Space s;
  if (backend == "line") {
    s.backend = Backend::line;
  } else if (backend == "euclidean") {
    s.backend = Backend::euclidean;
    s.dim = detail::get<std::size_t>(detail::field(j, "dim", where), where + ".dim");
    if (s.dim == 0) throw parse_error(where + ".dim: must be >= 1");
  } else if (backend == "matrix") {
    s.backend = Backend::matrix;
    const auto n = detail::get<std::size_t>(detail::field(j, "n", where), where + ".n");
    auto rows = detail::get<std::vector<std::vector<double>>>(detail::field(j, "D", where), where + ".D");
    if (rows.size() != n) throw parse_error(where + ".D: expected " + std::to_string(n) + " rows");
    s.matrix = MatrixSpace::make(std::move(rows));
  } else if (backend == "product") {
    s.backend = Backend::product;
    const auto& fs = detail::field(j, "factors", where);
    if (!fs.is_array() || fs.empty()) throw parse_error(where + ".factors: expected a nonempty array");
    for (std::size_t i = 0; i < fs.size(); ++i)
      s.factors.push_back(space_from_json(fs[i], where + ".factors[" + std::to_string(i) + "]"));
  } else {
    throw parse_error(where + ".backend: unknown backend \"" + backend + "\"");
  }
  return s;
}

inline json body_to_json(const GroundSet& a) {
  json j;
  switch (a.backend()) {
    case Backend::line: {
      j["intervals"] = json::array();
      for (const auto& iv : a.intervals()) j["intervals"].push_back({iv.lo, iv.hi});
      break;
    }
    case Backend::euclidean: j["points"] = a.points(); break;
    case Backend::matrix: j["indices"] = a.indices(); break;
    case Backend::product:
      j["factors"] = json::array();
      for (const auto& f : a.factors()) j["factors"].push_back(body_to_json(f));
      break;
  }
  return j;
}

inline GroundSet body_from_json(const Space& s, const json& j, const std::string& where) {
  switch (s.backend) {
    case Backend::line: {
      const auto raw = detail::get<std::vector<std::vector<double>>>(detail::field(j, "intervals", where),
                                                                      where + ".intervals");
      std::vector<Interval> iv;
      for (const auto& r : raw) {
        if (r.size() != 2) throw parse_error(where + ".intervals: every interval needs two endpoints");
        iv.push_back({r[0], r[1]});
      }
      return GroundSet::intervals(std::move(iv));
    }
    case Backend::euclidean: {
      auto pts = detail::get<std::vector<std::vector<double>>>(detail::field(j, "points", where), where + ".points");
      return GroundSet::points(s.dim, std::move(pts));
    }
    case Backend::matrix: {
      auto idx = detail::get<std::vector<std::size_t>>(detail::field(j, "indices", where), where + ".indices");
      return GroundSet::matrix(s.matrix, std::move(idx));
    }
    case Backend::product: {
      const auto& fs = detail::field(j, "factors", where);
      if (!fs.is_array() || fs.size() != s.factors.size()) {
        throw parse_error(where + ".factors: expected " + std::to_string(s.factors.size()) + " factors");
      }
      std::vector<GroundSet> parts;
      for (std::size_t i = 0; i < fs.size(); ++i)
        parts.push_back(body_from_json(s.factors[i], fs[i], where + ".factors[" + std::to_string(i) + "]"));
      return GroundSet::product(std::move(parts));
    }
  }
  throw parse_error(where + ": unknown backend");
}

inline json set_to_json(const GroundSet& a) {
  json j = space_to_json(a.space());
  if (a.backend() == Backend::product) {
    j["factors"] = json::array();
    for (const auto& f : a.factors()) j["factors"].push_back(set_to_json(f));
    return j;
  }
  j.update(body_to_json(a));
  return j;
}

inline GroundSet set_from_json(const json& j, const std::string& where = "set") {
  const Space s = space_from_json(j, where);
  try {
    return body_from_json(s, j, where);
  } catch (const construction_error& e) {
    throw construction_error(where + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------------------
// Fuzzy sets

inline json fuzzy_to_json(const FuzzySet& u) {
  json j;
  if (const auto* s = std::get_if<StepFuzzySet>(&u)) {
    j["kind"] = "step";
    j["space"] = space_to_json(s->space());
    j["levels"] = json::array();
    for (const auto& lv : s->levels()) j["levels"].push_back({{"alpha", lv.alpha}, {"set", body_to_json(lv.set)}});
    return j;
  }
  const auto& l = std::get<LinearFuzzyNumber>(u);
  j["kind"] = "linear";
  j["knots"] = json::array();
  for (const auto& k : l.knots()) j["knots"].push_back({{"alpha", k.alpha}, {"a", k.a}, {"b", k.b}});
  return j;
}

inline FuzzySet fuzzy_from_json(const json& j, const std::string& where = "fuzzy set") {
  const auto kind = detail::get<std::string>(detail::field(j, "kind", where), where + ".kind");
  if (kind == "step") {
    const Space s = space_from_json(detail::field(j, "space", where), where + ".space");
    const auto& lv = detail::field(j, "levels", where);
    if (!lv.is_array() || lv.empty()) throw parse_error(where + ".levels: expected a nonempty array");
    std::vector<Level> levels;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const std::string at = where + ": level " + std::to_string(i);
      const double alpha = detail::get<double>(detail::field(lv[i], "alpha", at), at + ".alpha");
      try {
        levels.push_back({alpha, body_from_json(s, detail::field(lv[i], "set", at), at + ".set")});
      } catch (const construction_error& e) {
        throw construction_error(at + ": " + e.what());
      } catch (const fuzzmetrics::domain_error& e) {
        throw construction_error(at + ": " + e.what());
      }
    }
    return StepFuzzySet::make(std::move(levels));
  }
  if (kind == "linear") {
    const auto& ks = detail::field(j, "knots", where);
    if (!ks.is_array()) throw parse_error(where + ".knots: expected an array");
    std::vector<Knot> knots;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string at = where + ": knot " + std::to_string(i);
      knots.push_back({detail::get<double>(detail::field(ks[i], "alpha", at), at + ".alpha"),
                       detail::get<double>(detail::field(ks[i], "a", at), at + ".a"),
                       detail::get<double>(detail::field(ks[i], "b", at), at + ".b")});
    }
    return LinearFuzzyNumber::make(std::move(knots));
  }
  throw parse_error(where + ".kind: unknown kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------------------
// Families

inline const char* to_string(Refinement r) { return r == Refinement::extend ? "extend" : "densify"; }

inline json family_to_json(const Family& f) {
  json j;
  j["members"] = json::array();
  for (const auto& u : f.members()) j["members"].push_back(fuzzy_to_json(u));
  if (const auto& g = f.generator()) {
    j["generator"] = {{"name", g->name}, {"indices", g->indices}, {"refinement", to_string(g->refinement)}};
  }
  return j;
}

inline Family family_from_json(const json& j) {
  const json& ms = j.is_array() ? j : detail::field(j, "members", "family");
  if (!ms.is_array() || ms.empty()) throw parse_error("family.members: expected a nonempty array");
  std::vector<FuzzySet> members;
  for (std::size_t i = 0; i < ms.size(); ++i) members.push_back(fuzzy_from_json(ms[i], "member " + std::to_string(i)));
  std::optional<Generator> gen;
  if (j.is_object() && j.contains("generator")) {
    const auto& g = j["generator"];
    Generator out;
    out.name = detail::get<std::string>(detail::field(g, "name", "generator"), "generator.name");
    out.indices = detail::get<std::vector<double>>(detail::field(g, "indices", "generator"), "generator.indices");
    const auto r = g.value("refinement", std::string("extend"));
    if (r != "extend" && r != "densify") throw parse_error("generator.refinement: expected extend or densify");
    out.refinement = r == "extend" ? Refinement::extend : Refinement::densify;
    gen = std::move(out);
  }
  return Family::make(std::move(members), std::move(gen));
}

// ---------------------------------------------------------------------------------------
// Reports

inline json metric_to_json(const MetricResult& m) {
  return {{"value", detail::number(m.value.value())}, {"exact", m.exact}, {"error_bound", m.error_bound}};
}

inline json audit_to_json(const AuditReport& r) {
  json j;
  j["p"] = r.p;
  j["metrics"] = {{"dp", metric_to_json(r.dp)},         {"dinf", metric_to_json(r.dinf)},
                  {"hend", metric_to_json(r.hend)},     {"hendmax", metric_to_json(r.hend_max)},
                  {"hsend", metric_to_json(r.hsend)},   {"hsendmax", metric_to_json(r.hsend_max)}};
  j["inequalities"] = json::array();
  for (const auto& e : r.entries) {
    j["inequalities"].push_back({{"name", e.name},
                                 {"lhs", detail::number(e.lhs)},
                                 {"rhs", detail::number(e.rhs)},
                                 {"slack", e.slack},
                                 {"pass", e.pass},
                                 {"equality_case", e.equality_case}});
  }
  j["pass"] = r.all_pass();
  j["equality_flags"] = r.tight_bounds();
  return j;
}

inline json report_to_json(const FamilyReport& r) {
  json j;
  j["p"] = r.p;
  j["members"] = r.members;
  j["evidence"] = to_string(r.evidence);
  j["net_metric"] = r.metric;
  j["support"] = json::array();
  for (const auto& s : r.support)
    j["support"].push_back({{"alpha", s.alpha}, {"diameter", detail::number(s.diameter)}, {"bounded", s.bounded}});
  j["h_grid"] = r.h_grid;
  j["moduli"] = r.moduli;
  j["equi_left_continuity"] = json::array();
  for (const auto& e : r.equi_rows) {
    json row{{"eps", e.eps}, {"pass", e.pass}, {"delta", e.delta}};
    if (e.coarse_delta) row["coarse_delta"] = *e.coarse_delta;
    if (e.coarsest_delta) row["coarsest_delta"] = *e.coarsest_delta;
    j["equi_left_continuity"].push_back(std::move(row));
  }
  j["witness"] = {{"member", r.equi.witness_member}, {"h", r.equi.witness_h}, {"omega", r.equi.witness_value}};
  j["uniform_bound"] = {{"M", detail::number(r.uniform.m.value())},
                        {"anchor", set_to_json(GroundSet::singleton(r.uniform.anchor))},
                        {"argmax", r.uniform.argmax},
                        {"pairwise_sup", r.uniform.pairwise_sup},
                        {"bounded", r.uniform.bounded}};
  j["nets"] = json::array();
  for (const auto& n : r.nets)
    j["nets"].push_back({{"eps", n.eps}, {"size", n.size}, {"sample_sizes", n.sample_sizes}, {"bounded", n.bounded},
                         {"verified", n.verified}});
  j["bound_chain"] = {{"applicable", r.chain.applicable}, {"h1", r.chain.h1},         {"L", r.chain.l},
                      {"M1", r.chain.m1},                 {"h2", r.chain.h2},         {"h", r.chain.h},
                      {"N", r.chain.n},                   {"tail_max", r.chain.tail_max},
                      {"bound", r.chain.bound},           {"observed", r.chain.observed}, {"holds", r.chain.holds}};
  j["verdicts"] = {{"support_bounded", r.support_bounded},
                   {"equi_left_continuous", r.equi_left_continuous},
                   {"uniformly_bounded", r.uniformly_bounded},
                   {"nets_bounded", r.nets_bounded}};
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back(
        {{"name", c.name}, {"premise", c.premise}, {"conclusion", c.conclusion}, {"status", to_string(c.status)}});
  j["library_bug"] = r.library_bug();
  return j;
}

/// table,member,h,eps,value — modulus rows (member × h), then net rows (one per ε).
inline std::string report_to_csv(const FamilyReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "table,member,h,eps,value\n";
  for (std::size_t i = 0; i < r.moduli.size(); ++i)
    for (std::size_t k = 0; k < r.h_grid.size(); ++k)
      os << "modulus," << i << ',' << r.h_grid[k] << ",," << r.moduli[i][k] << '\n';
  for (const auto& n : r.nets) os << "net,,," << n.eps << ',' << n.size << '\n';
  return os.str();
}

inline json convergence_to_json(const ConvergenceReport& r) {
  json j;
  j["p"] = r.p;
  j["alphas"] = r.alphas;
  j["rows"] = json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"n", row.n}, {"hend", row.hend}, {"dp", row.dp}, {"dinf", row.dinf},
                         {"dpe_bound", row.dpe_bound}, {"cutwise", row.cutwise}});
  j["trends"] = {{"hend", to_string(r.hend_trend)}, {"dp", to_string(r.dp_trend)}, {"dinf", to_string(r.dinf_trend)}};
  json cuts = json::array();
  for (auto t : r.cut_trends) cuts.push_back(to_string(t));
  j["trends"]["cutwise"] = std::move(cuts);
  j["checks"] = {{"aec", to_string(r.aec)}, {"dp_implies_hend", to_string(r.dp_implies_hend)}, {"dpe_all", r.dpe_all}};
  return j;
}

inline std::string convergence_to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "n,hend,dp,dinf,dpe_bound\n";
  for (const auto& row : r.rows) os << row.n << ',' << row.hend << ',' << row.dp << ',' << row.dinf << ',' << row.dpe_bound << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------------------
// Files

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw parse_error(path + ": cannot write");
  out << text;
}

}  // namespace fuzzmetrics::io

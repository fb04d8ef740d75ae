#pragma once

// Base metric spaces (X,d): interval unions on the real line, finite Euclidean point
// clouds, finite metric spaces given by a distance matrix, and finite products of
// those under the sup metric. Every GroundSet is nonempty and compact by construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzmetrics/config.hpp"
#include "fuzzmetrics/errors.hpp"
#include "fuzzmetrics/ext_real.hpp"

namespace fuzzmetrics {

enum class Backend { line, euclidean, matrix, product };

inline const char* to_string(Backend b) {
  switch (b) {
    case Backend::line: return "line";
    case Backend::euclidean: return "euclidean";
    case Backend::matrix: return "matrix";
    case Backend::product: return "product";
  }
  return "?";
}

/// A finite metric space {0,...,n-1} with a symmetric, zero-diagonal distance table.
class MatrixSpace {
 public:
  static std::shared_ptr<const MatrixSpace> make(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw construction_error("matrix space must have at least one point");
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw construction_error("distance matrix must be square");
      for (std::size_t j = 0; j < n; ++j) {
        const double v = rows[i][j];
        if (!std::isfinite(v) || v < 0.0) {
          throw construction_error("distance matrix entries must be finite and nonnegative");
        }
        d[i * n + j] = v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i * n + i] != 0.0) throw construction_error("distance matrix must have a zero diagonal");
      for (std::size_t j = i + 1; j < n; ++j) {
        if (d[i * n + j] != d[j * n + i]) throw construction_error("distance matrix must be symmetric");
        if (d[i * n + j] == 0.0) throw construction_error("distinct matrix points must have positive distance");
      }
    }
    return std::shared_ptr<const MatrixSpace>(new MatrixSpace(n, std::move(d)));
  }

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = at(i, j);
    return out;
  }

  friend bool operator==(const MatrixSpace& a, const MatrixSpace& b) {
    return a.n_ == b.n_ && a.d_ == b.d_;
  }

 private:
  MatrixSpace(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {}

  std::size_t n_;
  std::vector<double> d_;
};

using MatrixSpacePtr = std::shared_ptr<const MatrixSpace>;

inline bool same_matrix_space(const MatrixSpacePtr& a, const MatrixSpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Describes which space a point or set lives in. Products nest.
struct Space {
  Backend backend = Backend::line;
  std::size_t dim = 1;                // euclidean only
  MatrixSpacePtr matrix;              // matrix only
  std::vector<Space> factors;         // product only

  friend bool operator==(const Space& a, const Space& b) {
    if (a.backend != b.backend) return false;
    switch (a.backend) {
      case Backend::line: return true;
      case Backend::euclidean: return a.dim == b.dim;
      case Backend::matrix: return same_matrix_space(a.matrix, b.matrix);
      case Backend::product: return a.factors == b.factors;
    }
    return false;
  }

  std::string describe() const {
    switch (backend) {
      case Backend::line: return "line";
      case Backend::euclidean: return "euclidean(" + std::to_string(dim) + ")";
      case Backend::matrix: return "matrix(" + std::to_string(matrix ? matrix->size() : 0) + ")";
      case Backend::product: {
        std::string s = "product(";
        for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "," : "") + factors[i].describe();
        return s + ")";
      }
    }
    return "?";
  }
};

inline void require_same_space(const Space& a, const Space& b, const char* op) {
  if (!(a == b)) {
    throw usage_error(std::string(op) + ": backend mismatch (" + a.describe() + " vs " + b.describe() + ")");
  }
}

class GroundPoint;

namespace detail {
struct LinePoint { double x; };
struct EuclideanPoint { std::vector<double> x; };
struct MatrixPoint { MatrixSpacePtr space; std::size_t index; };
struct ProductPoint { std::vector<GroundPoint> parts; };
}  // namespace detail

class GroundPoint {
 public:
  static GroundPoint line(double x) {
    if (!std::isfinite(x)) throw construction_error("line point must be finite");
    return GroundPoint(detail::LinePoint{x});
  }
  static GroundPoint euclidean(std::vector<double> x) {
    if (x.empty()) throw construction_error("euclidean point must have dimension >= 1");
    for (double c : x)
      if (!std::isfinite(c)) throw construction_error("euclidean coordinates must be finite");
    return GroundPoint(detail::EuclideanPoint{std::move(x)});
  }
  static GroundPoint matrix(MatrixSpacePtr space, std::size_t index) {
    if (!space) throw construction_error("matrix point needs a space");
    if (index >= space->size()) {
      throw construction_error("matrix index " + std::to_string(index) + " outside space of size " +
                               std::to_string(space->size()));
    }
    return GroundPoint(detail::MatrixPoint{std::move(space), index});
  }
  static GroundPoint product(std::vector<GroundPoint> parts) {
    if (parts.empty()) throw construction_error("product point needs at least one component");
    return GroundPoint(detail::ProductPoint{std::move(parts)});
  }

  Backend backend() const { return static_cast<Backend>(v_.index()); }

  double x() const { return std::get<detail::LinePoint>(v_).x; }
  const std::vector<double>& coords() const { return std::get<detail::EuclideanPoint>(v_).x; }
  std::size_t index() const { return std::get<detail::MatrixPoint>(v_).index; }
  const MatrixSpacePtr& matrix_space() const { return std::get<detail::MatrixPoint>(v_).space; }
  const std::vector<GroundPoint>& parts() const { return std::get<detail::ProductPoint>(v_).parts; }

  Space space() const {
    Space s;
    s.backend = backend();
    switch (s.backend) {
      case Backend::line: break;
      case Backend::euclidean: s.dim = coords().size(); break;
      case Backend::matrix: s.matrix = matrix_space(); break;
      case Backend::product:
        for (const auto& p : parts()) s.factors.push_back(p.space());
        break;
    }
    return s;
  }

  friend bool operator==(const GroundPoint& a, const GroundPoint& b) {
    if (a.backend() != b.backend()) return false;
    switch (a.backend()) {
      case Backend::line: return a.x() == b.x();
      case Backend::euclidean: return a.coords() == b.coords();
      case Backend::matrix:
        return a.index() == b.index() && same_matrix_space(a.matrix_space(), b.matrix_space());
      case Backend::product: return a.parts() == b.parts();
    }
    return false;
  }

 private:
  using Storage = std::variant<detail::LinePoint, detail::EuclideanPoint, detail::MatrixPoint, detail::ProductPoint>;
  explicit GroundPoint(Storage v) : v_(std::move(v)) {}
  Storage v_;
};

struct Interval {
  double lo;
  double hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

class GroundSet;

namespace detail {
struct IntervalUnion { std::vector<Interval> parts; };
struct PointCloud { std::size_t dim; std::vector<std::vector<double>> points; };
struct MatrixSubset { MatrixSpacePtr space; std::vector<std::size_t> indices; };
struct ProductSet { std::vector<GroundSet> factors; };
}  // namespace detail

/// Merges a raw list of closed intervals into sorted, disjoint, maximal form.
/// Touching intervals ([0,1],[1,2]) merge.
inline std::vector<Interval> canonical_intervals(std::vector<Interval> raw) {
  if (raw.empty()) throw domain_error("interval list must be nonempty");
  for (const auto& iv : raw) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw domain_error("interval endpoints must be finite");
    if (iv.lo > iv.hi) throw domain_error("interval with lo > hi");
  }
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  out.push_back(raw.front());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, raw[i].hi);
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

class GroundSet {
 public:
  /// closure_of_interval_list: canonical line set from a raw interval list.
  static GroundSet intervals(std::vector<Interval> raw) {
    return GroundSet(detail::IntervalUnion{canonical_intervals(std::move(raw))});
  }
  static GroundSet interval(double lo, double hi) { return intervals({{lo, hi}}); }

  static GroundSet points(std::size_t dim, std::vector<std::vector<double>> pts) {
    if (dim == 0) throw construction_error("euclidean dimension must be >= 1");
    if (pts.empty()) throw construction_error("point cloud must be nonempty");
    for (const auto& p : pts) {
      if (p.size() != dim) throw construction_error("point dimension does not match declared dim");
      for (double c : p)
        if (!std::isfinite(c)) throw construction_error("euclidean coordinates must be finite");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return GroundSet(detail::PointCloud{dim, std::move(pts)});
  }

  static GroundSet matrix(MatrixSpacePtr space, std::vector<std::size_t> indices) {
    if (!space) throw construction_error("matrix set needs a space");
    if (indices.empty()) throw construction_error("matrix index set must be nonempty");
    for (auto i : indices) {
      if (i >= space->size()) {
        throw construction_error("matrix index " + std::to_string(i) + " outside space of size " +
                                 std::to_string(space->size()));
      }
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return GroundSet(detail::MatrixSubset{std::move(space), std::move(indices)});
  }

  static GroundSet product(std::vector<GroundSet> factors) {
    if (factors.empty()) throw construction_error("product set needs at least one factor");
    return GroundSet(detail::ProductSet{std::move(factors)});
  }

  static GroundSet singleton(const GroundPoint& p) {
    switch (p.backend()) {
      case Backend::line: return interval(p.x(), p.x());
      case Backend::euclidean: return points(p.coords().size(), {p.coords()});
      case Backend::matrix: return matrix(p.matrix_space(), {p.index()});
      case Backend::product: {
        std::vector<GroundSet> f;
        for (const auto& q : p.parts()) f.push_back(singleton(q));
        return product(std::move(f));
      }
    }
    throw usage_error("unknown backend");
  }

  Backend backend() const { return static_cast<Backend>(v_.index()); }

  const std::vector<Interval>& intervals() const { return std::get<detail::IntervalUnion>(v_).parts; }
  std::size_t dim() const { return std::get<detail::PointCloud>(v_).dim; }
  const std::vector<std::vector<double>>& points() const { return std::get<detail::PointCloud>(v_).points; }
  const MatrixSpacePtr& matrix_space() const { return std::get<detail::MatrixSubset>(v_).space; }
  const std::vector<std::size_t>& indices() const { return std::get<detail::MatrixSubset>(v_).indices; }
  const std::vector<GroundSet>& factors() const { return std::get<detail::ProductSet>(v_).factors; }

  Space space() const {
    Space s;
    s.backend = backend();
    switch (s.backend) {
      case Backend::line: break;
      case Backend::euclidean: s.dim = dim(); break;
      case Backend::matrix: s.matrix = matrix_space(); break;
      case Backend::product:
        for (const auto& f : factors()) s.factors.push_back(f.space());
        break;
    }
    return s;
  }

  /// True when the set is finite (all points can be listed).
  bool is_finite() const {
    switch (backend()) {
      case Backend::line:
        return std::all_of(intervals().begin(), intervals().end(),
                           [](const Interval& iv) { return iv.lo == iv.hi; });
      case Backend::euclidean:
      case Backend::matrix: return true;
      case Backend::product:
        return std::all_of(factors().begin(), factors().end(), [](const GroundSet& f) { return f.is_finite(); });
    }
    return false;
  }

  /// Lists the points of a finite set. Throws domain_error for sets with nondegenerate intervals.
  std::vector<GroundPoint> enumerate(std::size_t limit = 200000) const {
    std::vector<GroundPoint> out;
    switch (backend()) {
      case Backend::line:
        for (const auto& iv : intervals()) {
          if (iv.lo != iv.hi) throw domain_error("cannot enumerate a line set containing a nondegenerate interval");
          out.push_back(GroundPoint::line(iv.lo));
        }
        break;
      case Backend::euclidean:
        for (const auto& p : points()) out.push_back(GroundPoint::euclidean(p));
        break;
      case Backend::matrix:
        for (auto i : indices()) out.push_back(GroundPoint::matrix(matrix_space(), i));
        break;
      case Backend::product: {
        std::vector<std::vector<GroundPoint>> per;
        std::size_t total = 1;
        for (const auto& f : factors()) {
          per.push_back(f.enumerate(limit));
          total *= per.back().size();
          if (total > limit) throw domain_error("product set too large to enumerate");
        }
        std::vector<std::size_t> odo(per.size(), 0);
        for (std::size_t k = 0; k < total; ++k) {
          std::vector<GroundPoint> parts;
          for (std::size_t j = 0; j < per.size(); ++j) parts.push_back(per[j][odo[j]]);
          out.push_back(GroundPoint::product(std::move(parts)));
          for (std::size_t j = per.size(); j-- > 0;) {
            if (++odo[j] < per[j].size()) break;
            odo[j] = 0;
          }
        }
        break;
      }
    }
    return out;
  }

  friend bool operator==(const GroundSet& a, const GroundSet& b) {
    if (a.backend() != b.backend()) return false;
    switch (a.backend()) {
      case Backend::line: return a.intervals() == b.intervals();
      case Backend::euclidean: return a.dim() == b.dim() && a.points() == b.points();
      case Backend::matrix:
        return same_matrix_space(a.matrix_space(), b.matrix_space()) && a.indices() == b.indices();
      case Backend::product: return a.factors() == b.factors();
    }
    return false;
  }

 private:
  using Storage = std::variant<detail::IntervalUnion, detail::PointCloud, detail::MatrixSubset, detail::ProductSet>;
  explicit GroundSet(Storage v) : v_(std::move(v)) {}
  Storage v_;
};

/// closure_of_interval_list
inline GroundSet closure_of_interval_list(std::vector<Interval> raw) { return GroundSet::intervals(std::move(raw)); }

namespace detail {

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double dist_raw(const GroundPoint& x, const GroundPoint& y) {
  switch (x.backend()) {
    case Backend::line: return std::abs(x.x() - y.x());
    case Backend::euclidean: return euclid(x.coords(), y.coords());
    case Backend::matrix: return x.matrix_space()->at(x.index(), y.index());
    case Backend::product: {
      double m = 0.0;
      for (std::size_t j = 0; j < x.parts().size(); ++j) m = std::max(m, dist_raw(x.parts()[j], y.parts()[j]));
      return m;
    }
  }
  return 0.0;
}

/// Distance from x to a canonical interval union (binary search on the sorted parts).
inline double line_dist_to_set(double x, const std::vector<Interval>& parts) {
  auto it = std::upper_bound(parts.begin(), parts.end(), x, [](double v, const Interval& iv) { return v < iv.lo; });
  double best = std::numeric_limits<double>::infinity();
  if (it != parts.end()) best = it->lo - x;
  if (it != parts.begin()) {
    const Interval& left = *std::prev(it);
    best = std::min(best, x <= left.hi ? 0.0 : x - left.hi);
  }
  return best;
}

inline double dist_to_set_raw(const GroundPoint& x, const GroundSet& a) {
  switch (a.backend()) {
    case Backend::line: return line_dist_to_set(x.x(), a.intervals());
    case Backend::euclidean: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : a.points()) best = std::min(best, euclid(x.coords(), p));
      return best;
    }
    case Backend::matrix: {
      double best = std::numeric_limits<double>::infinity();
      for (auto i : a.indices()) best = std::min(best, a.matrix_space()->at(x.index(), i));
      return best;
    }
    case Backend::product: {
      // inf over a product under the sup metric decouples per factor.
      double m = 0.0;
      for (std::size_t j = 0; j < a.factors().size(); ++j)
        m = std::max(m, dist_to_set_raw(x.parts()[j], a.factors()[j]));
      return m;
    }
  }
  return 0.0;
}

}  // namespace detail

inline ExtReal dist(const GroundPoint& x, const GroundPoint& y) {
  require_same_space(x.space(), y.space(), "dist");
  return detail::dist_raw(x, y);
}

/// d(x, A) = inf_{a ∈ A} d(x, a), exact on every backend.
inline ExtReal dist_to_set(const GroundPoint& x, const GroundSet& a) {
  require_same_space(x.space(), a.space(), "dist_to_set");
  return detail::dist_to_set_raw(x, a);
}

/// Sup metric on a finite product; the space is given by its factor list.
inline ExtReal product_dist(const std::vector<GroundPoint>& x, const std::vector<GroundPoint>& y,
                            const std::vector<Space>& factors) {
  if (factors.empty()) throw domain_error("product space needs at least one factor");
  if (x.size() != factors.size() || y.size() != factors.size()) {
    throw usage_error("product_dist: arity mismatch");
  }
  double m = 0.0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    require_same_space(x[j].space(), factors[j], "product_dist");
    require_same_space(y[j].space(), factors[j], "product_dist");
    m = std::max(m, detail::dist_raw(x[j], y[j]));
  }
  return m;
}

inline bool contains(const GroundSet& a, const GroundPoint& x, double tol = 0.0) {
  return detail::dist_to_set_raw(x, a) <= tol;
}

/// Setwise inclusion a ⊆ b, up to tol on continuous backends.
inline bool is_subset(const GroundSet& a, const GroundSet& b, double tol = kTolerance) {
  require_same_space(a.space(), b.space(), "is_subset");
  switch (a.backend()) {
    case Backend::line: {
      const auto& bp = b.intervals();
      for (const auto& iv : a.intervals()) {
        auto it = std::upper_bound(bp.begin(), bp.end(), iv.lo + tol,
                                   [](double v, const Interval& j) { return v < j.lo; });
        if (it == bp.begin()) return false;
        const Interval& host = *std::prev(it);
        if (iv.lo < host.lo - tol || iv.hi > host.hi + tol) return false;
      }
      return true;
    }
    case Backend::euclidean:
      for (const auto& p : a.points()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b.points()) best = std::min(best, detail::euclid(p, q));
        if (best > tol) return false;
      }
      return true;
    case Backend::matrix:
      return std::includes(b.indices().begin(), b.indices().end(), a.indices().begin(), a.indices().end());
    case Backend::product:
      for (std::size_t j = 0; j < a.factors().size(); ++j)
        if (!is_subset(a.factors()[j], b.factors()[j], tol)) return false;
      return true;
  }
  return false;
}

/// sup of pairwise distances; exact on every backend.
inline ExtReal diameter(const GroundSet& a) {
  switch (a.backend()) {
    case Backend::line: return a.intervals().back().hi - a.intervals().front().lo;
    case Backend::euclidean: {
      double m = 0.0;
      const auto& pts = a.points();
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::max(m, detail::euclid(pts[i], pts[j]));
      return m;
    }
    case Backend::matrix: {
      double m = 0.0;
      const auto& idx = a.indices();
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j) m = std::max(m, a.matrix_space()->at(idx[i], idx[j]));
      return m;
    }
    case Backend::product: {
      double m = 0.0;
      for (const auto& f : a.factors()) m = std::max(m, diameter(f).value());
      return m;
    }
  }
  return 0.0;
}

/// Canonical union. Unions of product sets are not products, so they are rejected.
inline GroundSet set_union(const GroundSet& a, const GroundSet& b) {
  require_same_space(a.space(), b.space(), "union");
  switch (a.backend()) {
    case Backend::line: {
      auto raw = a.intervals();
      raw.insert(raw.end(), b.intervals().begin(), b.intervals().end());
      return GroundSet::intervals(std::move(raw));
    }
    case Backend::euclidean: {
      auto pts = a.points();
      pts.insert(pts.end(), b.points().begin(), b.points().end());
      return GroundSet::points(a.dim(), std::move(pts));
    }
    case Backend::matrix: {
      auto idx = a.indices();
      idx.insert(idx.end(), b.indices().begin(), b.indices().end());
      return GroundSet::matrix(a.matrix_space(), std::move(idx));
    }
    case Backend::product:
      if (a == b) return a;
      throw domain_error("union of product sets is not representable as a product");
  }
  throw usage_error("unknown backend");
}

}  // namespace fuzzmetrics

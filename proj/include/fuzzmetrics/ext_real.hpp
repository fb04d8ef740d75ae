#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

#include "fuzzmetrics/errors.hpp"

namespace fuzzmetrics {

/// A nonnegative real or +∞. Codomain of every distance in the library.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v < 0.0) {
      throw domain_error("ExtReal must be a nonnegative real or +inf");
    }
  }

  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return !is_finite(); }

  /// The underlying double; +inf when infinite.
  double value() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  friend ExtReal max(ExtReal a, ExtReal b) { return a.v_ < b.v_ ? b : a; }
  friend ExtReal min(ExtReal a, ExtReal b) { return a.v_ < b.v_ ? a : b; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

  friend std::ostream& operator<<(std::ostream& os, ExtReal e) {
    if (e.is_infinite()) return os << "inf";
    return os << e.v_;
  }

 private:
  double v_ = 0.0;
};

}  // namespace fuzzmetrics

#pragma once

#include <stdexcept>
#include <string>

namespace fuzzmetrics {

/// Operands live in different backends or spaces.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the operation's domain (p < 1, α ∉ [0,1], empty input ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value could not be built because an invariant failed (nesting, breakpoints, symmetry).
class construction_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed JSON input.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The certified path could not reach the requested tolerance.
class tolerance_error : public std::runtime_error {
 public:
  tolerance_error(const std::string& what, double best_bound)
      : std::runtime_error(what), best_bound_(best_bound) {}

  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

}  // namespace fuzzmetrics

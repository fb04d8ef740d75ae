#pragma once

namespace fuzzmetrics {

/// Absolute tolerance for geometric comparisons (subset tests, equality flags, audit slack).
inline constexpr double kTolerance = 1e-9;

/// Default target error for results on the certified (non-exact) path.
inline constexpr double kDefaultCertifiedTolerance = 1e-6;

/// Refinement rounds allowed on the certified path before giving up.
inline constexpr int kMaxRefinements = 40;

/// Cap on the number of α-levels produced when a linear fuzzy number is discretized.
inline constexpr long kMaxDiscretizationLevels = 1L << 20;

}  // namespace fuzzmetrics

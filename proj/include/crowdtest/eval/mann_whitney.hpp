#pragma once

#include <span>

namespace crowdtest::eval {

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first sample
  double p_value = 1.0;  // two-sided
  bool exact = false;
};

/// Two-sided Mann-Whitney U test. Uses the exact null distribution when the
/// smaller sample has at most 8 values, the larger at most kExactMaxSize,
/// and there are no ties; the tie-corrected normal approximation otherwise.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Exact branch. Requires non-empty, tie-free samples.
MannWhitneyResult mann_whitney_exact(std::span<const double> a, std::span<const double> b);

/// Normal approximation with tie and continuity correction.
MannWhitneyResult mann_whitney_normal(std::span<const double> a, std::span<const double> b);

inline constexpr int kExactMaxSmall = 8;
inline constexpr int kExactMaxSize = 400;

}  // namespace crowdtest::eval

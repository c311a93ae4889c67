#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "crowdtest/eval/history.hpp"

namespace crowdtest::eval {

/// Corpus medians used as a prediction for every task.
struct NaivePrediction {
  double total_bugs = 0.0;
  /// Median actual cost per BugPct checkpoint; NaN where no other task has one.
  std::array<double, kCheckpointCount> required_cost{};
};

/// Leave-one-out medians for task `evaluated`: computed over every other
/// task in `corpus`. Requires at least two tasks.
NaivePrediction naive_baseline(std::span<const TaskHistory> corpus, std::size_t evaluated);

}  // namespace crowdtest::eval

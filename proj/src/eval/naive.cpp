#include "crowdtest/eval/naive.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crowdtest/eval/metrics.hpp"

namespace crowdtest::eval {

NaivePrediction naive_baseline(std::span<const TaskHistory> corpus, std::size_t evaluated) {
  if (corpus.size() < 2) throw std::invalid_argument("naive baseline needs at least two tasks");
  if (evaluated >= corpus.size()) throw std::out_of_range("evaluated task outside corpus");

  NaivePrediction out;
  std::vector<double> totals;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (i != evaluated) totals.push_back(corpus[i].total_bugs);
  }
  out.total_bugs = median(std::move(totals));

  const auto levels = checkpoint_levels();
  for (int k = 0; k < kCheckpointCount; ++k) {
    std::vector<double> costs;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (i == evaluated) continue;
      if (auto c = corpus[i].actual_cost_at(levels[k])) costs.push_back(static_cast<double>(*c));
    }
    out.required_cost[k] =
        costs.empty() ? std::numeric_limits<double>::quiet_NaN() : median(std::move(costs));
  }
  return out;
}

}  // namespace crowdtest::eval

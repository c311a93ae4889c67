#include "crowdtest/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crowdtest::eval {

double relative_error(double predicted, double actual) {
  if (actual == 0.0) throw MetricError("relative error undefined for actual = 0");
  return (predicted - actual) / actual;
}

double f1_score(double pct_bug, double pct_reduced_cost) {
  const double sum = pct_bug + pct_reduced_cost;
  return sum > 0.0 ? 2.0 * pct_bug * pct_reduced_cost / sum : 0.0;
}

CostEffectiveness cost_effectiveness(int bugs_at_close, long long reports_at_close,
                                     int total_bugs, long long total_reports) {
  if (total_bugs <= 0 || total_reports <= 0) {
    throw MetricError("cost-effectiveness needs positive historical totals");
  }
  CostEffectiveness ce;
  ce.pct_bug = static_cast<double>(bugs_at_close) / total_bugs;
  ce.pct_reduced_cost = 1.0 - static_cast<double>(reports_at_close) / total_reports;
  ce.f1 = f1_score(ce.pct_bug, ce.pct_reduced_cost);
  return ce;
}

double median(std::vector<double> values) {
  if (values.empty()) throw MetricError("median of an empty sample");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
  return 0.5 * (lower + upper);
}

double stddev(std::span<const double> values) {
  if (values.empty()) throw MetricError("stddev of an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / n);
}

}  // namespace crowdtest::eval

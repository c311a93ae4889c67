#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace crowdtest::eval {

/// Raised when a metric is undefined for its inputs (zero actual, open task).
class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (predicted - actual) / actual; negative means underestimate.
double relative_error(double predicted, double actual);

/// Harmonic mean of %bug and %reducedCost; 0 when both are 0.
double f1_score(double pct_bug, double pct_reduced_cost);

struct CostEffectiveness {
  double pct_bug = 0.0;
  double pct_reduced_cost = 0.0;
  double f1 = 0.0;
};

/// Against historical totals: pct_bug = bugs_at_close / total_bugs,
/// pct_reduced_cost = 1 - reports_at_close / total_reports.
CostEffectiveness cost_effectiveness(int bugs_at_close, long long reports_at_close,
                                     int total_bugs, long long total_reports);

double median(std::vector<double> values);
/// Population standard deviation (divides by n).
double stddev(std::span<const double> values);

}  // namespace crowdtest::eval

#pragma once

#include <optional>
#include <span>
#include <stdexcept>

namespace crowdtest::eval {

/// Cumulative defect curve F(x) = K * (1 - exp(-x^2 / (2 sigma^2))), with x
/// measured in received reports.
struct RayleighModel {
  double k = 0.0;
  double sigma = 1.0;
  double sse = 0.0;

  double cumulative(double x) const;
  /// Smallest report index x > current with F(x) >= target_bugs; empty when
  /// the curve never reaches it.
  std::optional<double> reports_to_reach(double target_bugs) const;
};

struct CurvePoint {
  double x = 0.0;  // report index
  double y = 0.0;  // cumulative unique bugs
};

class RayleighFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit. K is profiled out in closed form for each sigma; sigma
/// is seeded on a log grid and refined with Brent's method.
/// Requires >= 3 points with non-decreasing counts, not all zero.
RayleighModel rayleigh_fit(std::span<const CurvePoint> points);

}  // namespace crowdtest::eval

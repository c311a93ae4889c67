#pragma once

#include <optional>
#include <span>
#include <vector>

namespace crowdtest::arima {

/// Model orders and windowing. A "window" is one group of smp_size reports;
/// the modelled series is the number of new unique bugs per window.
struct ArimaParams {
  int p = 5;
  int d = 0;
  int q = 1;
  int train_size = 10;
  int smp_size = 3;

  /// Throws std::invalid_argument unless all orders are non-negative,
  /// smp_size >= 1 and train_size > p + d + q.
  void validate() const;
};

/// y_t = c + sum phi_i y_{t-i} + sum theta_i e_{t-i} + e_t on the d-times
/// differenced series.
struct ArimaModel {
  std::vector<double> phi;
  std::vector<double> theta;
  double intercept = 0.0;
  double sigma_sq = 0.0;
  int d = 0;
  int first_window = 0;  // 1-based window range the model was fitted on
  int last_window = 0;

  friend bool operator==(const ArimaModel&, const ArimaModel&) = default;
};

struct FitDiagnostics {
  double initial_objective = 0.0;  // conditional SSE of the two-stage estimate
  double final_objective = 0.0;    // after simplex refinement
  int iterations = 0;
  bool degenerate = false;
};

/// Applies first differencing d times. Requires series.size() > d.
std::vector<double> difference(std::span<const double> series, int d);

/// Inverse of difference(): rebuilds the original series from its d-th
/// differences and its first d values.
std::vector<double> undifference(std::span<const double> differenced,
                                 std::span<const double> head, int d);

/// Conditional sum of squared one-step errors with zero pre-sample errors.
/// `coefficients` is [intercept, phi..., theta...].
double conditional_sse(std::span<const double> y, int p, int q,
                       std::span<const double> coefficients);

/// Fits on a raw window of exactly params.train_size values. The refined
/// coefficients keep the AR part stationary and the MA part invertible.
ArimaModel fit(std::span<const double> series, const ArimaParams& params,
               FitDiagnostics* diagnostics = nullptr);

/// Iterated forecasts in raw (undifferenced) space with future errors set to
/// zero; emitted values are clamped at 0. `history` is the raw series the
/// model was fitted on (or a longer one ending at the same point).
std::vector<double> forecast(const ArimaModel& model, std::span<const double> history,
                             int horizon);

}  // namespace crowdtest::arima

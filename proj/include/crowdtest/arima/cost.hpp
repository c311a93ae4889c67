#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "crowdtest/arima/arima.hpp"

namespace crowdtest::arima {

inline constexpr int kDefaultHorizonCap = 100;

/// Raised when a cost query arrives before train_size windows exist.
class WarmUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForecastUpdate {
  int window_index = 0;    // window at which the forecast was made
  int detected = 0;        // unique bugs detected up to that window
  ArimaModel model;
  std::vector<double> forecast;  // per future window, raw space, >= 0

  friend bool operator==(const ForecastUpdate&, const ForecastUpdate&) = default;
};

struct CostForecast {
  double target_pct = 0.0;
  long long target_bugs = 0;    // Y
  long long extra_reports = 0;  // K
  int horizon_windows = 0;
  bool reachable = false;

  friend bool operator==(const CostForecast&, const CostForecast&) = default;
};

/// Number of bugs that satisfies "at least target_pct of n_hat_rounded".
long long target_bug_count(double target_pct, long long n_hat_rounded);

/// Accumulates per-window forecasts until (Y - detected) more bugs are
/// expected. When the forecast runs out first the result is unreachable and
/// horizon_windows is the whole forecast length.
CostForecast required_cost(std::span<const double> window_forecast, int detected,
                           double target_pct, long long n_hat_rounded, int smp_size);

/// Refits on the latest train_size windows each time a window completes.
class SlidingForecaster {
 public:
  explicit SlidingForecaster(ArimaParams params, int horizon = kDefaultHorizonCap);

  /// Adds one completed window (its new-bug count and the running detected
  /// total). Returns a fresh forecast once warm-up is over.
  std::optional<ForecastUpdate> push(double window_value, int detected);

  bool warmed_up() const noexcept {
    return static_cast<int>(series_.size()) >= params_.train_size;
  }
  int windows() const noexcept { return static_cast<int>(series_.size()); }
  const ArimaParams& params() const noexcept { return params_; }
  int horizon() const noexcept { return horizon_; }
  std::span<const double> series() const noexcept { return series_; }
  const std::optional<ForecastUpdate>& latest() const noexcept { return latest_; }

  /// Throws WarmUpError before the first forecast.
  CostForecast required_cost(double target_pct, long long n_hat_rounded) const;

 private:
  ArimaParams params_;
  int horizon_;
  std::vector<double> series_;
  std::optional<ForecastUpdate> latest_;
};

/// Replays a whole window series through a SlidingForecaster.
std::vector<ForecastUpdate> slide_and_predict(std::span<const double> window_values,
                                              std::span<const int> detected,
                                              const ArimaParams& params,
                                              int horizon = kDefaultHorizonCap);

}  // namespace crowdtest::arima

#include "crowdtest/arima/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdtest::arima {

long long target_bug_count(double target_pct, long long n_hat_rounded) {
  if (!(target_pct > 0.0 && target_pct <= 1.0)) {
    throw std::invalid_argument("target_pct must be in (0, 1]");
  }
  // 0.85 * 20 evaluates to 17.000000000000004; don't let that become 18.
  return static_cast<long long>(
      std::ceil(target_pct * static_cast<double>(n_hat_rounded) - 1e-9));
}

CostForecast required_cost(std::span<const double> window_forecast, int detected,
                           double target_pct, long long n_hat_rounded, int smp_size) {
  if (smp_size < 1) throw std::invalid_argument("smp_size must be >= 1");
  CostForecast out;
  out.target_pct = target_pct;
  out.target_bugs = target_bug_count(target_pct, n_hat_rounded);
  if (detected >= out.target_bugs) {
    out.reachable = true;
    return out;
  }
  const double needed = static_cast<double>(out.target_bugs - detected);
  double accumulated = 0.0;
  for (std::size_t w = 0; w < window_forecast.size(); ++w) {
    accumulated += window_forecast[w];
    if (accumulated >= needed) {
      out.horizon_windows = static_cast<int>(w + 1);
      out.extra_reports = static_cast<long long>(out.horizon_windows) * smp_size;
      out.reachable = true;
      return out;
    }
  }
  out.horizon_windows = static_cast<int>(window_forecast.size());
  out.extra_reports = static_cast<long long>(out.horizon_windows) * smp_size;
  out.reachable = false;
  return out;
}

SlidingForecaster::SlidingForecaster(ArimaParams params, int horizon)
    : params_(params), horizon_(horizon) {
  params_.validate();
  if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
}

std::optional<ForecastUpdate> SlidingForecaster::push(double window_value, int detected) {
  series_.push_back(window_value);
  if (!warmed_up()) return std::nullopt;
  const auto window = std::span<const double>(series_).last(
      static_cast<std::size_t>(params_.train_size));
  ForecastUpdate update;
  update.window_index = windows();
  update.detected = detected;
  update.model = fit(window, params_);
  update.model.first_window = windows() - params_.train_size + 1;
  update.model.last_window = windows();
  update.forecast = forecast(update.model, window, horizon_);
  latest_ = update;
  return update;
}

CostForecast SlidingForecaster::required_cost(double target_pct, long long n_hat_rounded) const {
  if (!latest_) {
    throw WarmUpError("no forecast yet: " + std::to_string(windows()) + " of " +
                      std::to_string(params_.train_size) + " windows");
  }
  return arima::required_cost(latest_->forecast, latest_->detected, target_pct, n_hat_rounded,
                              params_.smp_size);
}

std::vector<ForecastUpdate> slide_and_predict(std::span<const double> window_values,
                                              std::span<const int> detected,
                                              const ArimaParams& params, int horizon) {
  if (window_values.size() != detected.size()) {
    throw std::invalid_argument("window values and detected counts differ in length");
  }
  SlidingForecaster forecaster(params, horizon);
  std::vector<ForecastUpdate> updates;
  for (std::size_t i = 0; i < window_values.size(); ++i) {
    if (auto u = forecaster.push(window_values[i], detected[i])) updates.push_back(std::move(*u));
  }
  return updates;
}

}  // namespace crowdtest::arima

#include "crowdtest/service/views.hpp"

#include <limits>

namespace crowdtest::service {

namespace {

const crc::CrcEstimate& primary(const sim::TaskSnapshot& s, const sim::PipelineConfig& config) {
  auto it = s.latest_estimates.find(config.estimator);
  if (it == s.latest_estimates.end() || !it->second.ok()) {
    throw NotReadyError("no " + std::string(crc::to_string(config.estimator)) +
                        " estimate yet for task " + s.task_id);
  }
  return it->second;
}

}  // namespace

arima::CostForecast snapshot_cost(const sim::TaskSnapshot& s, const sim::PipelineConfig& config,
                                  double target_pct) {
  if (!(target_pct > 0.0 && target_pct <= 1.0)) {
    throw std::invalid_argument("target must be in (0, 1]");
  }
  const auto& estimate = primary(s, config);
  if (!s.latest_forecast) {
    throw NotReadyError("forecast warming up: " + std::to_string(s.windows_completed) + " of " +
                        std::to_string(config.arima.train_size) + " windows");
  }
  return arima::required_cost(s.latest_forecast->forecast, s.latest_forecast->detected,
                              target_pct, estimate.n_hat_rounded, config.arima.smp_size);
}

TradeoffView tradeoff_view(double achieved_pct, std::optional<arima::CostForecast> cost,
                           const decision::TradeoffBenchmarks& b) {
  TradeoffView v;
  v.achieved_pct = achieved_pct;
  v.next_objective = decision::next_objective(achieved_pct);
  double extra = std::numeric_limits<double>::infinity();
  if (v.next_objective && cost && cost->reachable) extra = static_cast<double>(cost->extra_reports);
  if (v.next_objective) v.cost = std::move(cost);
  v.region = decision::classify_tradeoff(achieved_pct, extra, b);
  return v;
}

TradeoffView tradeoff_for(const sim::TaskSnapshot& s, const sim::PipelineConfig& config,
                          const decision::TradeoffBenchmarks& b) {
  b.validate();
  primary(s, config);
  const double achieved = s.achieved_pct.value_or(0.0);
  const auto next = decision::next_objective(achieved);
  std::optional<arima::CostForecast> cost;
  if (next) cost = snapshot_cost(s, config, *next);
  return tradeoff_view(achieved, cost, b);
}

}  // namespace crowdtest::service

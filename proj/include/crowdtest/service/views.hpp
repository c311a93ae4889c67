#pragma once

#include <optional>
#include <stdexcept>

#include "crowdtest/sim/pipeline.hpp"

namespace crowdtest::service {

/// A prediction was asked for before the task has one (ARIMA warm-up or no
/// usable total-bug estimate yet).
class NotReadyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Required cost computed from the snapshot's latest forecast and primary
/// estimate; same numbers as TaskPipeline::required_cost.
arima::CostForecast snapshot_cost(const sim::TaskSnapshot& s, const sim::PipelineConfig& config,
                                  double target_pct);

struct TradeoffView {
  double achieved_pct = 0.0;
  std::optional<double> next_objective;
  std::optional<arima::CostForecast> cost;  // empty once achieved >= 1
  decision::TradeoffRegion region = decision::TradeoffRegion::Continue;
};

/// Region for the next 5% objective. Unreachable or no further objective
/// counts as infinite cost.
TradeoffView tradeoff_view(double achieved_pct, std::optional<arima::CostForecast> cost,
                           const decision::TradeoffBenchmarks& b);

TradeoffView tradeoff_for(const sim::TaskSnapshot& s, const sim::PipelineConfig& config,
                          const decision::TradeoffBenchmarks& b);

}  // namespace crowdtest::service

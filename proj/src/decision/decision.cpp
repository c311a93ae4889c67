#include "crowdtest/decision/decision.hpp"

#include <cmath>
#include <stdexcept>

#include "crowdtest/arima/cost.hpp"

namespace crowdtest::decision {

void CloseCriterion::validate() const {
  if (!(target_pct > 0.0 && target_pct <= 1.0)) {
    throw std::invalid_argument("close target must be in (0, 1]");
  }
  if (stability_span < 1) throw std::invalid_argument("stability span must be >= 1");
}

bool close_condition_met(std::span<const MonitorPoint> history, const CloseCriterion& crit) {
  const auto span = static_cast<std::size_t>(crit.stability_span);
  if (history.size() < span) return false;
  const auto& last = history.back();
  if (!last.estimate.ok()) return false;
  const long long n_hat = last.estimate.n_hat_rounded;
  for (std::size_t i = history.size() - span; i < history.size(); ++i) {
    const auto& e = history[i].estimate;
    if (!e.ok() || e.n_hat_rounded != n_hat) return false;
  }
  return last.detected >= arima::target_bug_count(crit.target_pct, n_hat);
}

CloseDecision evaluate_close(std::span<const MonitorPoint> history, const CloseCriterion& crit) {
  crit.validate();
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (!close_condition_met(history.first(i + 1), crit)) continue;
    const auto& p = history[i];
    CloseDecision d;
    d.closed = true;
    d.close_capture_index = p.estimate.capture_index;
    d.close_time = p.last_report_time;
    d.detected_at_close = p.detected;
    d.n_hat_at_close = p.estimate.n_hat_rounded;
    d.reports_at_close = p.reports_received;
    return d;
  }
  return {};
}

std::string_view to_string(TradeoffRegion region) {
  switch (region) {
    case TradeoffRegion::Continue: return "Continue";
    case TradeoffRegion::DrillDown: return "DrillDown";
    case TradeoffRegion::ThinkTwice: return "ThinkTwice";
    case TradeoffRegion::Close: return "Close";
  }
  return "?";
}

void TradeoffBenchmarks::validate() const {
  if (!(quality > 0.0 && quality <= 1.0)) {
    throw std::invalid_argument("quality benchmark must be in (0, 1]");
  }
  if (!(cost >= 0.0)) throw std::invalid_argument("cost benchmark must be >= 0");
}

TradeoffRegion classify_tradeoff(double achieved_pct, double next_objective_cost,
                                 const TradeoffBenchmarks& b) {
  const bool meets_quality = achieved_pct >= b.quality;
  const bool affordable = next_objective_cost <= b.cost;
  if (!meets_quality) return affordable ? TradeoffRegion::Continue : TradeoffRegion::DrillDown;
  return affordable ? TradeoffRegion::ThinkTwice : TradeoffRegion::Close;
}

std::optional<double> next_objective(double achieved_pct) {
  if (achieved_pct >= 1.0) return std::nullopt;
  if (achieved_pct < 0.0) achieved_pct = 0.0;
  // step count on the 0.05 grid; the epsilon keeps 0.85 from landing on 16.999...
  const double steps = std::floor(achieved_pct * 20.0 + 1e-9) + 1.0;
  return std::min(steps / 20.0, 1.0);
}

}  // namespace crowdtest::decision

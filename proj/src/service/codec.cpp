#include "crowdtest/service/codec.hpp"

#include <cmath>

namespace crowdtest::service {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const crc::CrcEstimate& e) {
  json j = {{"estimator", crc::to_string(e.kind)},
            {"capture_index", e.capture_index},
            {"detected", e.detected},
            {"status", crc::to_string(e.status)}};
  if (e.ok()) {
    j["n_hat"] = number_or_null(e.n_hat);
    j["n_hat_rounded"] = e.n_hat_rounded;
  } else {
    j["n_hat"] = nullptr;
    j["n_hat_rounded"] = nullptr;
  }
  if (e.coverage) j["C"] = number_or_null(*e.coverage);
  if (e.gamma_sq) j["gamma_sq"] = number_or_null(*e.gamma_sq);
  return j;
}

json to_json(const arima::ArimaModel& m) {
  return {{"phi", m.phi},
          {"theta", m.theta},
          {"intercept", number_or_null(m.intercept)},
          {"sigma_sq", number_or_null(m.sigma_sq)},
          {"d", m.d},
          {"first_window", m.first_window},
          {"last_window", m.last_window}};
}

json to_json(const arima::ForecastUpdate& f) {
  return {{"window_index", f.window_index},
          {"detected", f.detected},
          {"model", to_json(f.model)},
          {"forecast", f.forecast}};
}

json to_json(const arima::CostForecast& c) {
  return {{"target_pct", c.target_pct},
          {"target_bugs", c.target_bugs},
          {"reachable", c.reachable},
          {"extra_reports", c.reachable ? json(c.extra_reports) : json(nullptr)},
          {"horizon_windows", c.horizon_windows}};
}

json to_json(const decision::CloseDecision& d) {
  json j = {{"closed", d.closed}};
  if (!d.closed) return j;
  j["close_capture_index"] = d.close_capture_index ? json(*d.close_capture_index) : json(nullptr);
  j["close_time"] = d.close_time ? json(format_timestamp(*d.close_time)) : json(nullptr);
  j["detected_at_close"] = d.detected_at_close;
  j["n_hat_at_close"] = d.n_hat_at_close;
  j["reports_at_close"] = d.reports_at_close;
  return j;
}

json to_json(const sim::TaskSnapshot& s) {
  json estimates = json::object();
  for (const auto& [kind, e] : s.latest_estimates) estimates[std::string(crc::to_string(kind))] = to_json(e);
  return {{"task_id", s.task_id},
          {"status", sim::to_string(s.status)},
          {"reports_received", s.reports_received},
          {"bugs_detected", s.bugs_detected},
          {"captures_completed", s.captures_completed},
          {"windows_completed", s.windows_completed},
          {"latest_estimates", std::move(estimates)},
          {"latest_forecast", s.latest_forecast ? to_json(*s.latest_forecast) : json(nullptr)},
          {"close_decision", to_json(s.close_decision)},
          {"manually_closed", s.manually_closed},
          {"achieved_pct", s.achieved_pct ? number_or_null(*s.achieved_pct) : json(nullptr)}};
}

json to_json(const sim::PipelineEvent& e) {
  json j = std::visit(
      [](const auto& ev) -> json {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, sim::CaptureCompleted>) {
          return {{"capture_index", ev.capture_index},
                  {"reports_received", ev.reports_received},
                  {"bugs_detected", ev.bugs_detected},
                  {"last_report_time", format_timestamp(ev.last_report_time)}};
        } else if constexpr (std::is_same_v<T, sim::EstimateUpdated>) {
          return {{"estimate", to_json(ev.estimate)}};
        } else if constexpr (std::is_same_v<T, sim::ForecastUpdated>) {
          return {{"window_index", ev.window_index},
                  {"detected", ev.detected},
                  {"forecast", ev.forecast}};
        } else {
          return {{"decision", to_json(ev.decision)}, {"manual", ev.manual}};
        }
      },
      e);
  j["type"] = sim::event_name(e);
  return j;
}

}  // namespace crowdtest::service

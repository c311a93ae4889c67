#pragma once

#include "crowdtest/sim/pipeline.hpp"
#include "json.hpp"

namespace crowdtest::service {

using nlohmann::json;

json to_json(const crc::CrcEstimate& e);
json to_json(const arima::ArimaModel& m);
json to_json(const arima::ForecastUpdate& f);
/// extra_reports is null when the target is unreachable within the horizon.
json to_json(const arima::CostForecast& c);
json to_json(const decision::CloseDecision& d);
json to_json(const sim::TaskSnapshot& s);
/// {"type": <event name>, ...fields}
json to_json(const sim::PipelineEvent& e);

/// NaN and infinities become null.
json number_or_null(double v);

}  // namespace crowdtest::service

#include "crowdtest/core/sampler.hpp"

#include <stdexcept>

#include "crowdtest/core/timestamp.hpp"

namespace crowdtest {

IncrementalSampler::IncrementalSampler(int smp_size, std::chrono::seconds skew_tolerance)
    : smp_size_(smp_size), skew_tolerance_(skew_tolerance) {
  if (smp_size < 1) throw std::invalid_argument("smp_size must be >= 1");
  if (skew_tolerance.count() < 0) throw std::invalid_argument("negative skew tolerance");
  pending_.reserve(static_cast<std::size_t>(smp_size));
}

std::optional<CaptureSample> IncrementalSampler::ingest(Report r) {
  try {
    validate(r);
  } catch (const std::invalid_argument& e) {
    throw IngestError(IngestError::Kind::InvalidReport, e.what());
  }
  if (seen_ids_.contains(r.report_id)) {
    throw IngestError(IngestError::Kind::DuplicateId, "duplicate report_id " + r.report_id);
  }
  if (last_timestamp_ && r.timestamp + skew_tolerance_ < *last_timestamp_) {
    throw IngestError(IngestError::Kind::OutOfOrder,
                      "report " + r.report_id + " at " + format_timestamp(r.timestamp) +
                          " precedes last ingested " + format_timestamp(*last_timestamp_));
  }

  seen_ids_.insert(r.report_id);
  if (!last_timestamp_ || r.timestamp > *last_timestamp_) last_timestamp_ = r.timestamp;
  pending_.push_back(std::move(r));

  if (static_cast<int>(pending_.size()) < smp_size_) return std::nullopt;

  CaptureSample capture{++captures_emitted_, std::move(pending_)};
  pending_.clear();
  pending_.reserve(static_cast<std::size_t>(smp_size_));
  return capture;
}

}  // namespace crowdtest

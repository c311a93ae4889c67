#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "crowdtest/core/report.hpp"

namespace crowdtest {

class IngestError : public std::runtime_error {
 public:
  enum class Kind { OutOfOrder, DuplicateId, InvalidReport };

  IngestError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A group of exactly `smp_size` consecutive reports treated as one
/// capture occasion.
struct CaptureSample {
  int index = 0;  // 1-based
  std::vector<Report> reports;
};

/// Groups a chronological report stream of one task into fixed-size
/// captures. A trailing partial buffer is never emitted.
class IncrementalSampler {
 public:
  explicit IncrementalSampler(int smp_size,
                              std::chrono::seconds skew_tolerance = std::chrono::seconds{0});

  /// Appends `r` to the pending buffer and returns a capture once the buffer
  /// holds smp_size reports. On error the sampler state is unchanged.
  std::optional<CaptureSample> ingest(Report r);

  int smp_size() const noexcept { return smp_size_; }
  int captures_emitted() const noexcept { return captures_emitted_; }
  std::size_t reports_ingested() const noexcept { return seen_ids_.size(); }
  std::span<const Report> pending() const noexcept { return pending_; }

 private:
  int smp_size_;
  std::chrono::seconds skew_tolerance_;
  int captures_emitted_ = 0;
  std::optional<Timestamp> last_timestamp_;
  std::vector<Report> pending_;
  std::unordered_set<std::string> seen_ids_;
};

}  // namespace crowdtest

#include "crowdtest/sim/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace crowdtest::sim {

double DistributionSpec::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::Constant: return a;
    case Kind::Beta: {
      std::gamma_distribution<double> x(a, 1.0);
      std::gamma_distribution<double> y(b, 1.0);
      const double gx = x(rng);
      const double gy = y(rng);
      return gx + gy > 0.0 ? gx / (gx + gy) : 0.0;
    }
    case Kind::LogNormal: return std::lognormal_distribution<double>(a, b)(rng);
  }
  return a;
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant: os << "Constant(" << a << ")"; break;
    case Kind::Beta: os << "Beta(" << a << ", " << b << ")"; break;
    case Kind::LogNormal: os << "LogNormal(" << a << ", " << b << ")"; break;
  }
  return os.str();
}

void SyntheticTaskConfig::validate() const {
  if (n_true < 1) throw std::invalid_argument("n_true must be >= 1");
  if (n_workers < 1) throw std::invalid_argument("n_workers must be >= 1");
  if (!(invalid_rate >= 0.0 && invalid_rate <= 1.0)) {
    throw std::invalid_argument("invalid_rate must be in [0, 1]");
  }
  if (total_reports < 0) throw std::invalid_argument("total_reports must be >= 0");
  if (!(inter_arrival_s > 0.0)) throw std::invalid_argument("inter_arrival must be > 0");
  if (task_id.empty()) throw std::invalid_argument("task_id must be non-empty");
}

int GroundTruth::detected_in_stream() const {
  std::set<int> seen;
  for (const auto& b : report_bug) {
    if (b) seen.insert(*b);
  }
  return static_cast<int>(seen.size());
}

std::string bug_tag(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "bug-%04d", index + 1);
  return buf;
}

SyntheticTask generate_task(const SyntheticTaskConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  SyntheticTask task;
  auto& truth = task.truth;
  truth.task_id = cfg.task_id;
  truth.n_true = cfg.n_true;
  truth.seed = cfg.seed;
  for (int j = 0; j < cfg.n_true; ++j) {
    truth.detectability.push_back(std::clamp(cfg.bug_detectability.sample(rng), 0.0, 1.0));
  }
  for (int i = 0; i < cfg.n_workers; ++i) {
    truth.capability.push_back(std::max(cfg.worker_capability.sample(rng), 0.0));
  }

  std::vector<std::discrete_distribution<int>> pick_bug;
  std::vector<bool> can_find;
  pick_bug.reserve(truth.capability.size());
  for (double cap : truth.capability) {
    std::vector<double> weights;
    weights.reserve(truth.detectability.size());
    double total = 0.0;
    for (double det : truth.detectability) {
      weights.push_back(std::clamp(det * cap, 0.0, 1.0));
      total += weights.back();
    }
    can_find.push_back(total > 0.0);
    if (total <= 0.0) std::fill(weights.begin(), weights.end(), 1.0);
    pick_bug.emplace_back(weights.begin(), weights.end());
  }

  std::bernoulli_distribution invalid(cfg.invalid_rate);
  std::uniform_int_distribution<int> pick_worker(0, cfg.n_workers - 1);
  std::exponential_distribution<double> gap(1.0 / cfg.inter_arrival_s);

  double elapsed = 0.0;
  task.reports.reserve(static_cast<std::size_t>(cfg.total_reports));
  for (int k = 0; k < cfg.total_reports; ++k) {
    elapsed += gap(rng);
    char id[32];
    std::snprintf(id, sizeof id, "r%06d", k + 1);

    Report r;
    r.report_id = id;
    r.task_id = cfg.task_id;
    r.timestamp = cfg.start + std::chrono::seconds{static_cast<long long>(std::floor(elapsed))};

    std::optional<int> bug;
    if (!invalid(rng)) {
      const int worker = pick_worker(rng);
      r.worker_id = "w" + std::to_string(worker + 1);
      if (can_find[worker]) bug = pick_bug[worker](rng);
    }
    if (bug) {
      r.is_bug = true;
      r.bug_tag = bug_tag(*bug);
    }
    truth.report_bug.push_back(bug);
    task.reports.push_back(std::move(r));
  }
  return task;
}

std::vector<SyntheticTask> generate_corpus(const CorpusConfig& cfg) {
  if (cfg.tasks < 0) throw std::invalid_argument("task count must be >= 0");
  if (cfg.n_true_min < 1 || cfg.n_true_max < cfg.n_true_min) {
    throw std::invalid_argument("bad n_true range");
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> n_true(cfg.n_true_min, cfg.n_true_max);
  std::vector<SyntheticTask> corpus;
  corpus.reserve(static_cast<std::size_t>(cfg.tasks));
  for (int i = 0; i < cfg.tasks; ++i) {
    SyntheticTaskConfig task_cfg = cfg.base;
    char id[32];
    std::snprintf(id, sizeof id, "task-%04d", i + 1);
    task_cfg.task_id = id;
    task_cfg.n_true = n_true(rng);
    // 13 * (213 / 26.0) lands a hair below 106.5
    task_cfg.total_reports =
        static_cast<int>(std::lround(task_cfg.n_true * cfg.reports_per_bug + 1e-9));
    task_cfg.seed = rng();
    corpus.push_back(generate_task(task_cfg));
  }
  return corpus;
}

}  // namespace crowdtest::sim

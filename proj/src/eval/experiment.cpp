#include "crowdtest/eval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "crowdtest/arima/cost.hpp"
#include "crowdtest/core/arrival_table.hpp"
#include "crowdtest/core/sampler.hpp"
#include "crowdtest/decision/decision.hpp"
#include "crowdtest/eval/mann_whitney.hpp"
#include "crowdtest/eval/naive.hpp"
#include "crowdtest/eval/rayleigh.hpp"

namespace crowdtest::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Whole-capture table of a completed stream plus per-capture estimates.
struct CrcTrace {
  int smp_size = 0;
  BugArrivalTable table;
  std::vector<crc::CrcEstimate> series;
  std::vector<Timestamp> capture_end;

  /// Prediction after `captures` whole captures; observed count when the
  /// estimator has nothing yet.
  double predicted_total(long long captures) const {
    if (captures <= 0) return 0.0;
    const auto& e = series[static_cast<std::size_t>(captures - 1)];
    return e.ok() ? e.n_hat : static_cast<double>(e.detected);
  }
};

CrcTrace crc_trace(const TaskLog& task, crc::EstimatorKind kind, int smp_size) {
  CrcTrace trace;
  trace.smp_size = smp_size;
  IncrementalSampler sampler(smp_size);
  for (const auto& r : task.reports) {
    if (auto capture = sampler.ingest(r)) {
      trace.capture_end.push_back(capture->reports.back().timestamp);
      trace.table.append(*capture);
    }
  }
  trace.series = crc::estimate_prefix_series(trace.table, kind);
  return trace;
}

std::vector<CurvePoint> curve_prefix(const TaskHistory& h, long long reports) {
  std::vector<CurvePoint> points;
  points.reserve(static_cast<std::size_t>(reports));
  for (long long i = 1; i <= reports; ++i) {
    points.push_back({static_cast<double>(i), static_cast<double>(h.cumulative_bugs[i - 1])});
  }
  return points;
}

std::optional<RayleighModel> try_rayleigh(const TaskHistory& h, long long reports) {
  if (reports < 3) return std::nullopt;
  const auto points = curve_prefix(h, reports);
  try {
    return rayleigh_fit(points);
  } catch (const RayleighFitError&) {
    return std::nullopt;
  }
}

/// New unique bugs per window and the running detected count after each.
struct WindowSeries {
  std::vector<double> fresh;
  std::vector<int> detected;
};

WindowSeries window_series(const TaskLog& task, int smp_size) {
  WindowSeries w;
  std::unordered_set<std::string> seen;
  int fresh = 0;
  int in_window = 0;
  for (const auto& r : task.reports) {
    if (r.bug_tag && seen.insert(*r.bug_tag).second) ++fresh;
    if (++in_window == smp_size) {
      w.fresh.push_back(fresh);
      w.detected.push_back(static_cast<int>(seen.size()));
      fresh = 0;
      in_window = 0;
    }
  }
  return w;
}

struct Samples {
  std::string method;
  std::vector<std::vector<double>> values;       // per checkpoint
  std::vector<std::vector<std::string>> tasks;   // matching task ids
};

void add(Samples& s, int k, const std::string& task_id, double v) {
  if (std::isnan(v)) return;
  s.values[k].push_back(v);
  s.tasks[k].push_back(task_id);
}

ExperimentTable assemble(CheckpointKind kind, std::vector<Samples> samples) {
  ExperimentTable table;
  table.kind = kind;
  const auto levels = checkpoint_levels();
  table.levels.assign(levels.begin(), levels.end());
  for (const auto& s : samples) {
    MethodRow row;
    row.method = s.method;
    for (int k = 0; k < kCheckpointCount; ++k) {
      const auto& v = s.values[k];
      row.count.push_back(static_cast<int>(v.size()));
      row.median.push_back(v.empty() ? kNaN : median(v));
      row.stddev.push_back(v.empty() ? kNaN : stddev(v));
      for (std::size_t i = 0; i < v.size(); ++i) {
        table.records.push_back({s.method, levels[k], s.tasks[k][i], v[i]});
      }
    }
    table.rows.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      PairwiseRow test;
      test.first = samples[a].method;
      test.second = samples[b].method;
      for (int k = 0; k < kCheckpointCount; ++k) {
        const auto& x = samples[a].values[k];
        const auto& y = samples[b].values[k];
        test.p_value.push_back(x.empty() || y.empty() ? kNaN : mann_whitney_u(x, y).p_value);
      }
      table.tests.push_back(std::move(test));
    }
  }
  return table;
}

Samples empty_samples(std::string method) {
  Samples s;
  s.method = std::move(method);
  s.values.resize(kCheckpointCount);
  s.tasks.resize(kCheckpointCount);
  return s;
}

int smp_for(const ExperimentConfig& cfg, crc::EstimatorKind kind) {
  auto it = cfg.smp_sizes.find(kind);
  return it == cfg.smp_sizes.end() ? reference_smp_sizes().at(kind) : it->second;
}

ExperimentTable report_pct_experiment(std::span<const TaskLog> corpus,
                                      std::span<const TaskHistory> histories,
                                      const ExperimentConfig& cfg) {
  const auto levels = checkpoint_levels();
  std::vector<Samples> samples;
  for (auto kind : cfg.estimators) {
    auto s = empty_samples(std::string(crc::to_string(kind)));
    const int smp = smp_for(cfg, kind);
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      const auto errors = report_checkpoint_errors(corpus[t], histories[t], kind, smp);
      for (int k = 0; k < kCheckpointCount; ++k) add(s, k, corpus[t].task_id, errors[k]);
    }
    samples.push_back(std::move(s));
  }
  for (auto baseline : cfg.baselines) {
    auto s = empty_samples(std::string(to_string(baseline)));
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      const auto& h = histories[t];
      if (baseline == Baseline::Naive) {
        if (histories.size() < 2) break;
        const double total = naive_baseline(histories, t).total_bugs;
        for (int k = 0; k < kCheckpointCount; ++k) {
          add(s, k, h.task_id, relative_error(total, h.total_bugs));
        }
        continue;
      }
      for (int k = 0; k < kCheckpointCount; ++k) {
        const long long r = h.reports_at(levels[k]);
        const auto model = try_rayleigh(h, r);
        const double observed = r > 0 ? h.cumulative_bugs[r - 1] : 0.0;
        add(s, k, h.task_id, relative_error(model ? model->k : observed, h.total_bugs));
      }
    }
    samples.push_back(std::move(s));
  }
  return assemble(CheckpointKind::ReportPct, std::move(samples));
}

ExperimentTable bug_pct_experiment(std::span<const TaskLog> corpus,
                                   std::span<const TaskHistory> histories,
                                   const ExperimentConfig& cfg) {
  const auto levels = checkpoint_levels();
  const int window = cfg.arima.smp_size;
  const double unreachable_cost = static_cast<double>(cfg.horizon) * window;
  std::vector<Samples> samples;

  for (auto kind : cfg.estimators) {
    auto s = empty_samples("ARIMA(" + std::string(crc::to_string(kind)) + ")");
    const int smp = smp_for(cfg, kind);
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      const auto& h = histories[t];
      const auto trace = crc_trace(corpus[t], kind, smp);
      const auto windows = window_series(corpus[t], window);
      for (int k = 0; k < kCheckpointCount; ++k) {
        const auto actual = h.actual_cost_at(levels[k]);
        if (!actual) continue;
        const long long r0 = *h.reports_until(h.bugs_at(levels[k]));
        const long long w = r0 / window;
        if (w < cfg.arima.train_size) continue;
        const long long captures = r0 / smp;
        if (captures < 1 || !trace.series[captures - 1].ok()) continue;

        const auto fit_window = std::span<const double>(windows.fresh)
                                    .subspan(static_cast<std::size_t>(w - cfg.arima.train_size),
                                             static_cast<std::size_t>(cfg.arima.train_size));
        const auto model = arima::fit(fit_window, cfg.arima);
        const auto fc = arima::forecast(model, fit_window, cfg.horizon);
        const double next = std::min(levels[k] + 0.05, 1.0);
        const auto cost = arima::required_cost(fc, windows.detected[w - 1], next,
                                               trace.series[captures - 1].n_hat_rounded, window);
        const double predicted =
            std::max(0.0, static_cast<double>(w * window + cost.extra_reports - r0));
        add(s, k, h.task_id, relative_error(predicted, static_cast<double>(*actual)));
      }
    }
    samples.push_back(std::move(s));
  }

  for (auto baseline : cfg.baselines) {
    auto s = empty_samples(std::string(to_string(baseline)));
    for (std::size_t t = 0; t < corpus.size(); ++t) {
      const auto& h = histories[t];
      std::optional<NaivePrediction> naive;
      if (baseline == Baseline::Naive) {
        if (histories.size() < 2) break;
        naive = naive_baseline(histories, t);
      }
      for (int k = 0; k < kCheckpointCount; ++k) {
        const auto actual = h.actual_cost_at(levels[k]);
        if (!actual) continue;
        double predicted = kNaN;
        if (naive) {
          predicted = naive->required_cost[k];
        } else {
          const long long r0 = *h.reports_until(h.bugs_at(levels[k]));
          const auto model = try_rayleigh(h, r0);
          if (!model) continue;
          const double next = std::min(levels[k] + 0.05, 1.0);
          const double target = std::ceil(next * model->k - 1e-9);
          if (target <= h.cumulative_bugs[r0 - 1]) {
            predicted = 0.0;
          } else if (auto x = model->reports_to_reach(target)) {
            predicted = std::max(0.0, std::ceil(*x) - static_cast<double>(r0));
          } else {
            predicted = unreachable_cost;
          }
        }
        if (!std::isnan(predicted)) {
          add(s, k, h.task_id, relative_error(predicted, static_cast<double>(*actual)));
        }
      }
    }
    samples.push_back(std::move(s));
  }
  return assemble(CheckpointKind::BugPct, std::move(samples));
}

}  // namespace

std::string_view to_string(Baseline b) { return b == Baseline::Rayleigh ? "Rayleigh" : "Naive"; }

std::map<crc::EstimatorKind, int> reference_smp_sizes() {
  using crc::EstimatorKind;
  return {{EstimatorKind::M0, 8},
          {EstimatorKind::MtCH, 8},
          {EstimatorKind::MhCH, 6},
          {EstimatorKind::MhJK, 3},
          {EstimatorKind::Mth, 8}};
}

const MethodRow* ExperimentTable::row(std::string_view method) const {
  for (const auto& r : rows) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

std::array<double, kCheckpointCount> report_checkpoint_errors(const TaskLog& task,
                                                              const TaskHistory& history,
                                                              crc::EstimatorKind kind,
                                                              int smp_size) {
  const auto trace = crc_trace(task, kind, smp_size);
  const auto levels = checkpoint_levels();
  std::array<double, kCheckpointCount> errors{};
  for (int k = 0; k < kCheckpointCount; ++k) {
    const long long captures = history.reports_at(levels[k]) / smp_size;
    errors[k] = relative_error(trace.predicted_total(captures), history.total_bugs);
  }
  return errors;
}

ExperimentTable run_experiment(std::span<const TaskLog> corpus, const ExperimentConfig& cfg) {
  if (cfg.estimators.empty()) {
    ExperimentTable empty;
    empty.kind = cfg.kind;
    return empty;
  }
  std::vector<TaskLog> tasks;
  std::vector<TaskHistory> histories;
  for (const auto& log : corpus) {
    auto h = TaskHistory::from(log);
    if (h.total_bugs == 0) continue;
    tasks.push_back(log);
    histories.push_back(std::move(h));
  }
  return cfg.kind == CheckpointKind::ReportPct ? report_pct_experiment(tasks, histories, cfg)
                                               : bug_pct_experiment(tasks, histories, cfg);
}

std::vector<CloseOutcome> close_outcomes(std::span<const TaskLog> corpus,
                                         crc::EstimatorKind kind, int smp_size,
                                         double target_pct, int stability_span) {
  const decision::CloseCriterion crit{target_pct, stability_span};
  crit.validate();
  std::vector<CloseOutcome> outcomes;
  for (const auto& task : corpus) {
    const auto h = TaskHistory::from(task);
    if (h.total_bugs == 0) continue;
    const auto trace = crc_trace(task, kind, smp_size);
    std::vector<decision::MonitorPoint> points;
    points.reserve(trace.series.size());
    for (std::size_t i = 0; i < trace.series.size(); ++i) {
      const auto& e = trace.series[i];
      points.push_back({e, e.detected, static_cast<long long>(i + 1) * smp_size,
                        trace.capture_end[i]});
    }
    const auto d = decision::evaluate_close(points, crit);
    CloseOutcome out;
    out.task_id = task.task_id;
    out.closed = d.closed;
    if (d.closed) {
      out.close_capture_index = *d.close_capture_index;
      out.metrics = cost_effectiveness(d.detected_at_close, d.reports_at_close, h.total_bugs,
                                       h.total_reports);
    } else {
      out.metrics = cost_effectiveness(h.total_bugs, h.total_reports, h.total_bugs,
                                       h.total_reports);
    }
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

CloseSummary summarize_close(double target_pct, std::span<const CloseOutcome> outcomes) {
  CloseSummary s;
  s.target_pct = target_pct;
  s.tasks = static_cast<int>(outcomes.size());
  if (outcomes.empty()) return s;
  std::vector<double> bug, reduced, f1;
  for (const auto& o : outcomes) {
    bug.push_back(o.metrics.pct_bug);
    reduced.push_back(o.metrics.pct_reduced_cost);
    f1.push_back(o.metrics.f1);
    if (!o.closed) ++s.never_closed;
  }
  s.median_pct_bug = median(bug);
  s.std_pct_bug = stddev(bug);
  s.median_pct_reduced_cost = median(reduced);
  s.std_pct_reduced_cost = stddev(reduced);
  s.median_f1 = median(f1);
  s.std_f1 = stddev(f1);
  return s;
}

TuningResult select_by_subsets(
    const std::vector<std::vector<std::array<double, kCheckpointCount>>>& errors,
    std::span<const int> candidates, int repetitions, std::uint64_t seed) {
  if (candidates.empty()) throw std::invalid_argument("no tuning candidates");
  if (errors.size() != candidates.size()) {
    throw std::invalid_argument("one error matrix per candidate required");
  }
  const std::size_t tasks = errors.front().size();
  if (tasks == 0) throw std::invalid_argument("tuning needs tasks");
  const auto subset = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(2.0 * static_cast<double>(tasks) / 3.0)));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(tasks);
  TuningResult result;
  for (int c : candidates) result.wins[c] = 0;

  std::vector<double> column;
  for (int rep = 0; rep < repetitions; ++rep) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    int winner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      double score = 0.0;
      for (int k = 0; k < kCheckpointCount; ++k) {
        column.clear();
        for (std::size_t i = 0; i < subset; ++i) column.push_back(errors[c][order[i]][k]);
        score += std::abs(median(column));
      }
      if (score < best || (score == best && candidates[c] < winner)) {
        best = score;
        winner = candidates[c];
      }
    }
    ++result.wins[winner];
  }

  int most = -1;
  for (auto [candidate, wins] : result.wins) {  // ascending, so ties keep the smallest
    if (wins > most) {
      most = wins;
      result.best = candidate;
    }
  }
  return result;
}

TuningResult tune_smp_size(std::span<const TaskLog> corpus, crc::EstimatorKind kind,
                           std::span<const int> candidates, int repetitions,
                           std::uint64_t seed) {
  std::vector<const TaskLog*> tasks;
  for (const auto& log : corpus) {
    if (TaskHistory::from(log).total_bugs > 0) tasks.push_back(&log);
  }
  if (tasks.size() < 3) throw std::invalid_argument("tuning needs at least 3 tasks with bugs");
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskLog* a, const TaskLog* b) { return a->task_id < b->task_id; });
  std::vector<TaskHistory> histories;
  for (const auto* t : tasks) histories.push_back(TaskHistory::from(*t));

  std::vector<std::vector<std::array<double, kCheckpointCount>>> errors;
  for (int c : candidates) {
    if (c < 1) throw std::invalid_argument("smp_size candidates must be >= 1");
    auto& per_task = errors.emplace_back();
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      per_task.push_back(report_checkpoint_errors(*tasks[t], histories[t], kind, c));
    }
  }
  return select_by_subsets(errors, candidates, repetitions, seed);
}

}  // namespace crowdtest::eval

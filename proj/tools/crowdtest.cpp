// crowdtest: generate synthetic tasks, replay report logs through the
// pipeline, evaluate and tune on a corpus, serve the HTTP API.

#include <spdlog/spdlog.h>

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdtest/core/report_io.hpp"
#include "crowdtest/eval/experiment.hpp"
#include "crowdtest/service/codec.hpp"
#include "crowdtest/service/server.hpp"
#include "crowdtest/service/views.hpp"
#include "crowdtest/sim/generator.hpp"
#include "crowdtest/sim/pipeline.hpp"

namespace fs = std::filesystem;
using namespace crowdtest;
using nlohmann::json;

namespace {

struct PipelineFlags {
  int smp_size = 8;
  std::string estimator = "Mth";
  double close_at = 1.0;
  int stability_span = 2;
  bool no_auto_close = false;
  int arima_p = 5, arima_d = 0, arima_q = 1;
  int train_size = 10;
  int window_size = 3;
  int horizon = arima::kDefaultHorizonCap;
  int skew = 0;

  sim::PipelineConfig config() const {
    sim::PipelineConfig c;
    c.crc_smp_size = smp_size;
    c.estimator = crc::parse_estimator_kind(estimator);
    c.close.target_pct = close_at;
    c.close.stability_span = stability_span;
    c.auto_close = !no_auto_close;
    c.arima.p = arima_p;
    c.arima.d = arima_d;
    c.arima.q = arima_q;
    c.arima.train_size = train_size;
    c.arima.smp_size = window_size;
    c.horizon = horizon;
    c.skew_tolerance = std::chrono::seconds(skew);
    c.validate();
    return c;
  }
};

void add_pipeline_flags(CLI::App& app, PipelineFlags& f) {
  const std::string g = "Pipeline";
  app.add_option("--smp-size", f.smp_size, "Reports per CRC capture")->group(g)->capture_default_str();
  app.add_option("--estimator", f.estimator, "Primary estimator: M0, MtCH, MhCH, MhJK, Mth")
      ->group(g)
      ->capture_default_str();
  app.add_option("--close-at", f.close_at, "Close criterion: fraction of predicted total bugs")
      ->group(g)
      ->capture_default_str();
  app.add_option("--stability-span", f.stability_span, "Captures with an identical estimate")
      ->group(g)
      ->capture_default_str();
  app.add_flag("--no-auto-close", f.no_auto_close, "Never close automatically")->group(g);
  app.add_option("--arima-p", f.arima_p, "AR order")->group(g)->capture_default_str();
  app.add_option("--arima-d", f.arima_d, "Differencing order")->group(g)->capture_default_str();
  app.add_option("--arima-q", f.arima_q, "MA order")->group(g)->capture_default_str();
  app.add_option("--train-size", f.train_size, "Windows per ARIMA fit")->group(g)->capture_default_str();
  app.add_option("--window-size", f.window_size, "Reports per ARIMA window")->group(g)->capture_default_str();
  app.add_option("--horizon", f.horizon, "Forecast horizon cap in windows")->group(g)->capture_default_str();
  app.add_option("--skew", f.skew, "Tolerated timestamp regression in seconds")->group(g)->capture_default_str();
}

bool is_report_log(const fs::path& p) {
  const auto name = p.filename().string();
  if (name.ends_with(".truth.json") || name == "summary.json") return false;
  const auto ext = p.extension().string();
  return ext == ".csv" || ext == ".jsonl" || ext == ".json";
}

/// A single log file or every report log in a directory, split by task.
std::vector<eval::TaskLog> load_tasks(const fs::path& input) {
  std::vector<Report> all;
  if (fs::is_directory(input)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input)) {
      if (e.is_regular_file() && is_report_log(e.path())) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto part = read_reports(f);
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  } else {
    all = read_reports(input);
  }
  std::vector<eval::TaskLog> tasks;
  for (auto& [id, reports] : group_by_task(std::move(all))) tasks.push_back({id, std::move(reports)});
  return tasks;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  return out;
}

std::string cell(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- generate

struct GenerateFlags {
  fs::path out;
  int tasks = 1;
  int n_true = 26;
  int n_min = 10;
  int n_max = 90;
  int reports = 213;
  double reports_per_bug = 213.0 / 26.0;
  int workers = 40;
  double invalid_rate = 0.4;
  double inter_arrival = 300.0;
  std::uint64_t seed = 20240101;
  std::string format = "csv";
};

json truth_json(const sim::GroundTruth& t) {
  return {{"task_id", t.task_id},
          {"n_true", t.n_true},
          {"seed", t.seed},
          {"detected_in_stream", t.detected_in_stream()},
          {"detectabilities", t.detectability},
          {"capabilities", t.capability}};
}

int run_generate(const GenerateFlags& f) {
  sim::SyntheticTaskConfig base;
  base.n_workers = f.workers;
  base.invalid_rate = f.invalid_rate;
  base.inter_arrival_s = f.inter_arrival;

  std::vector<sim::SyntheticTask> tasks;
  if (f.tasks == 1) {
    base.n_true = f.n_true;
    base.total_reports = f.reports;
    base.seed = f.seed;
    tasks.push_back(sim::generate_task(base));
  } else {
    sim::CorpusConfig c;
    c.tasks = f.tasks;
    c.n_true_min = f.n_min;
    c.n_true_max = f.n_max;
    c.reports_per_bug = f.reports_per_bug;
    c.seed = f.seed;
    c.base = base;
    tasks = sim::generate_corpus(c);
  }
  fs::create_directories(f.out);
  for (const auto& t : tasks) {
    write_reports(f.out / (t.truth.task_id + "." + f.format), t.reports);
    open_out(f.out / (t.truth.task_id + ".truth.json")) << truth_json(t.truth).dump(2) << '\n';
  }
  std::cout << "wrote " << tasks.size() << " task(s) to " << f.out.string() << '\n';
  return 0;
}

// ------------------------------------------------------------------ replay

struct ReplayFlags {
  fs::path input;
  std::optional<double> speed;
  fs::path events;
  fs::path decisions;
  fs::path forecasts;
  double target = 0.95;
  double quality = 0.85;
  double cost = 10.0;
  std::string task;
};

json decision_record(const sim::TaskSnapshot& s, const sim::PipelineConfig& config,
                     const ReplayFlags& f) {
  json j = {{"task_id", s.task_id},
            {"capture_index", s.captures_completed},
            {"closed", s.close_decision.closed},
            {"target_pct", config.close.target_pct},
            {"detected", s.bugs_detected},
            {"n_hat_rounded", nullptr},
            {"region", nullptr},
            {"quality_benchmark", f.quality},
            {"cost_benchmark", f.cost}};
  if (auto it = s.latest_estimates.find(config.estimator); it != s.latest_estimates.end() && it->second.ok()) {
    j["n_hat_rounded"] = it->second.n_hat_rounded;
  }
  try {
    j["region"] = decision::to_string(service::tradeoff_for(s, config, {f.quality, f.cost}).region);
  } catch (const service::NotReadyError&) {
  }
  return j;
}

json forecast_record(const sim::TaskSnapshot& s, const sim::PipelineConfig& config, double target) {
  json j = {{"task_id", s.task_id},
            {"window_index", s.latest_forecast->window_index},
            {"forecast", s.latest_forecast->forecast},
            {"target_pct", target},
            {"extra_reports", nullptr},
            {"reachable", nullptr}};
  try {
    const auto c = service::snapshot_cost(s, config, target);
    j["extra_reports"] = c.reachable ? json(c.extra_reports) : json(nullptr);
    j["reachable"] = c.reachable;
  } catch (const service::NotReadyError&) {
  }
  return j;
}

int run_replay(const ReplayFlags& f, const sim::PipelineConfig& config) {
  std::optional<std::ofstream> events, decisions, forecasts;
  if (!f.events.empty()) events = open_out(f.events);
  if (!f.decisions.empty()) decisions = open_out(f.decisions);
  if (!f.forecasts.empty()) forecasts = open_out(f.forecasts);
  for (const auto& log : load_tasks(f.input)) {
    if (!f.task.empty() && log.task_id != f.task) continue;
    sim::TaskPipeline pipeline(log.task_id, config);
    sim::ReplayOptions opts;
    opts.speed = f.speed;
    std::vector<sim::PipelineEvent> produced;
    for (const auto& r : log.reports) {
      // one report at a time so per-capture records see the live snapshot
      auto step = sim::replay(std::span<const Report>(&r, 1), pipeline, opts);
      for (const auto& e : step) {
        if (events) {
          json j = service::to_json(e);
          j["task_id"] = log.task_id;
          *events << j.dump() << '\n';
        }
        if (decisions && std::holds_alternative<sim::EstimateUpdated>(e)) {
          *decisions << decision_record(pipeline.snapshot(), config, f).dump() << '\n';
        }
        if (forecasts && std::holds_alternative<sim::ForecastUpdated>(e)) {
          *forecasts << forecast_record(pipeline.snapshot(), config, f.target).dump() << '\n';
        }
      }
      produced.insert(produced.end(), step.begin(), step.end());
    }
    json summary = service::to_json(pipeline.snapshot());
    summary["events"] = produced.size();
    summary["total_reports"] = pipeline.total_reports_seen();
    summary["total_bugs"] = pipeline.total_bugs_seen();
    std::cout << summary.dump() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateFlags {
  fs::path input;
  fs::path out;
  std::string kind = "all";
  std::vector<std::string> estimators{"Mth"};
  std::vector<std::string> baselines{"Rayleigh", "Naive"};
  std::vector<double> targets{0.80, 0.85, 0.90, 0.95, 1.00};
};

void write_table(const fs::path& dir, const std::string& prefix, const eval::ExperimentTable& t) {
  const auto header = [&](std::ostream& out, const std::string& first) {
    out << first;
    for (double l : t.levels) out << ',' << cell(l);
    out << '\n';
  };
  auto median = open_out(dir / (prefix + "_median.csv"));
  auto stddev = open_out(dir / (prefix + "_stddev.csv"));
  auto count = open_out(dir / (prefix + "_count.csv"));
  header(median, "method");
  header(stddev, "method");
  header(count, "method");
  for (const auto& r : t.rows) {
    median << r.method;
    stddev << r.method;
    count << r.method;
    for (std::size_t k = 0; k < r.median.size(); ++k) {
      median << ',' << cell(r.median[k]);
      stddev << ',' << cell(r.stddev[k]);
      count << ',' << r.count[k];
    }
    median << '\n';
    stddev << '\n';
    count << '\n';
  }
  auto pvalues = open_out(dir / (prefix + "_pvalues.csv"));
  header(pvalues, "first,second");
  for (const auto& p : t.tests) {
    pvalues << p.first << ',' << p.second;
    for (double v : p.p_value) pvalues << ',' << cell(v);
    pvalues << '\n';
  }
  auto longf = open_out(dir / (prefix + "_long.csv"));
  longf << "method,checkpoint,task_id,relative_error\n";
  for (const auto& r : t.records) {
    longf << r.method << ',' << cell(r.level) << ',' << r.task_id << ',' << cell(r.value) << '\n';
  }
}

json table_json(const eval::ExperimentTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json med = json::array(), sd = json::array();
    for (double v : r.median) med.push_back(service::number_or_null(v));
    for (double v : r.stddev) sd.push_back(service::number_or_null(v));
    rows.push_back({{"method", r.method}, {"median", med}, {"stddev", sd}, {"count", r.count}});
  }
  return {{"checkpoint_kind", eval::to_string(t.kind)}, {"levels", t.levels}, {"methods", rows}};
}

int run_evaluate(const EvaluateFlags& f, const PipelineFlags& pf, bool smp_overridden) {
  const auto tasks = load_tasks(f.input);
  const auto config = pf.config();
  spdlog::info("evaluating {} tasks", tasks.size());
  json summary = {{"tasks", tasks.size()}};

  eval::ExperimentConfig cfg;
  cfg.estimators.clear();
  for (const auto& e : f.estimators) cfg.estimators.push_back(crc::parse_estimator_kind(e));
  cfg.baselines.clear();
  for (const auto& b : f.baselines) {
    if (b == "Rayleigh" || b == "rayleigh") {
      cfg.baselines.push_back(eval::Baseline::Rayleigh);
    } else if (b == "Naive" || b == "naive") {
      cfg.baselines.push_back(eval::Baseline::Naive);
    } else {
      throw std::invalid_argument("unknown baseline: " + b);
    }
  }
  if (smp_overridden) {
    for (auto kind : crc::kAllEstimators) cfg.smp_sizes[kind] = pf.smp_size;
  }
  cfg.arima = config.arima;
  cfg.horizon = config.horizon;

  const auto run = [&](eval::CheckpointKind kind, const std::string& prefix) {
    cfg.kind = kind;
    const auto table = eval::run_experiment(tasks, cfg);
    write_table(f.out, prefix, table);
    summary[prefix] = table_json(table);
  };
  if (f.kind == "report" || f.kind == "all") run(eval::CheckpointKind::ReportPct, "report_pct");
  if (f.kind == "bug" || f.kind == "all") run(eval::CheckpointKind::BugPct, "bug_pct");
  if (f.kind == "close" || f.kind == "all") {
    const int smp = smp_overridden ? pf.smp_size : eval::reference_smp_sizes().at(config.estimator);
    auto out = open_out(f.out / "close.csv");
    out << "target,tasks,never_closed,median_pct_bug,std_pct_bug,median_pct_reduced_cost,"
           "std_pct_reduced_cost,median_f1,std_f1\n";
    auto per_task = open_out(f.out / "close_long.csv");
    per_task << "target,task_id,closed,close_capture,pct_bug,pct_reduced_cost,f1\n";
    json rows = json::array();
    for (double target : f.targets) {
      const auto outcomes =
          eval::close_outcomes(tasks, config.estimator, smp, target, config.close.stability_span);
      const auto s = eval::summarize_close(target, outcomes);
      out << cell(target) << ',' << s.tasks << ',' << s.never_closed << ',' << cell(s.median_pct_bug)
          << ',' << cell(s.std_pct_bug) << ',' << cell(s.median_pct_reduced_cost) << ','
          << cell(s.std_pct_reduced_cost) << ',' << cell(s.median_f1) << ',' << cell(s.std_f1) << '\n';
      for (const auto& o : outcomes) {
        per_task << cell(target) << ',' << o.task_id << ',' << (o.closed ? 1 : 0) << ','
                 << o.close_capture_index << ',' << cell(o.metrics.pct_bug) << ','
                 << cell(o.metrics.pct_reduced_cost) << ',' << cell(o.metrics.f1) << '\n';
      }
      rows.push_back({{"target", target},
                      {"tasks", s.tasks},
                      {"never_closed", s.never_closed},
                      {"median_pct_bug", s.median_pct_bug},
                      {"median_pct_reduced_cost", s.median_pct_reduced_cost},
                      {"median_f1", s.median_f1}});
    }
    summary["close"] = rows;
  }
  if (!summary.contains("report_pct") && !summary.contains("bug_pct") && !summary.contains("close")) {
    throw std::invalid_argument("--kind must be report, bug, close or all");
  }
  open_out(f.out / "summary.json") << summary.dump(2) << '\n';
  std::cout << "results written to " << f.out.string() << '\n';
  return 0;
}

// -------------------------------------------------------------------- tune

struct TuneFlags {
  fs::path input;
  std::string estimator = "Mth";  // the global --estimator
  int min = 2;
  int max = 30;
  int reps = 1000;
  std::uint64_t seed = 1;
};

int run_tune(const TuneFlags& f) {
  if (f.min < 1 || f.max < f.min) throw std::invalid_argument("need 1 <= --min <= --max");
  std::vector<int> candidates;
  for (int c = f.min; c <= f.max; ++c) candidates.push_back(c);
  const auto tasks = load_tasks(f.input);
  const auto kind = crc::parse_estimator_kind(f.estimator);
  const auto result = eval::tune_smp_size(tasks, kind, candidates, f.reps, f.seed);
  json wins = json::object();
  for (auto [c, w] : result.wins) wins[std::to_string(c)] = w;
  std::cout << json{{"estimator", crc::to_string(kind)},
                    {"best_smp_size", result.best},
                    {"repetitions", f.reps},
                    {"wins", wins}}
                   .dump(2)
            << '\n';
  return 0;
}

// ------------------------------------------------------------------- serve

service::ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct ServeFlags {
  std::string host = "0.0.0.0";
  int port = 8080;
  fs::path data_dir;
};

int run_serve(const ServeFlags& f, const sim::PipelineConfig& config) {
  service::StoreConfig sc;
  sc.pipeline = config;
  if (!f.data_dir.empty()) sc.data_dir = f.data_dir;
  service::TaskStore store(sc);
  service::ApiServer server(store);
  const int port = server.bind(f.host, f.port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  spdlog::info("serving {} task(s) on {}:{}", store.task_ids().size(), f.host, port);
  server.listen();
  g_server = nullptr;
  return 0;
}

// ----------------------------------------------------------------- predict

struct PredictFlags {
  fs::path input;
  std::string task;
  double target = 0.95;
  double quality = 0.85;
  double cost = 10.0;
};

int run_predict(const PredictFlags& f, const sim::PipelineConfig& config) {
  const auto tasks = load_tasks(f.input);
  for (const auto& log : tasks) {
    if (!f.task.empty() && log.task_id != f.task) continue;
    sim::TaskPipeline pipeline(log.task_id, config);
    sim::replay(log.reports, pipeline);
    const auto& s = pipeline.snapshot();
    json out = {{"snapshot", service::to_json(s)}};
    try {
      out["forecast"] = service::to_json(service::snapshot_cost(s, config, f.target));
    } catch (const service::NotReadyError& e) {
      out["forecast"] = {{"error", e.what()}};
    }
    try {
      const auto view = service::tradeoff_for(s, config, {f.quality, f.cost});
      out["tradeoff"] = {{"region", decision::to_string(view.region)},
                         {"achieved_pct", view.achieved_pct},
                         {"next_objective", view.next_objective ? json(*view.next_objective) : json(nullptr)},
                         {"cost", view.cost ? service::to_json(*view.cost) : json(nullptr)}};
    } catch (const service::NotReadyError& e) {
      out["tradeoff"] = {{"error", e.what()}};
    }
    std::cout << out.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crowdtesting decision support: total-bug estimation, cost forecasting, close decisions"};
  app.set_config("--config", "", "Key-value config file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")->capture_default_str();

  PipelineFlags pf;
  add_pipeline_flags(app, pf);

  GenerateFlags gf;
  auto* gen = app.add_subcommand("generate", "Write synthetic task logs plus ground-truth sidecars");
  gen->add_option("--out", gf.out, "Output directory")->required();
  gen->add_option("--tasks", gf.tasks, "Number of tasks; 1 writes a single task")->capture_default_str();
  gen->add_option("--n-true", gf.n_true, "True bug count (single task)")->capture_default_str();
  gen->add_option("--reports", gf.reports, "Report count (single task)")->capture_default_str();
  gen->add_option("--n-min", gf.n_min, "Smallest true bug count (corpus)")->capture_default_str();
  gen->add_option("--n-max", gf.n_max, "Largest true bug count (corpus)")->capture_default_str();
  gen->add_option("--reports-per-bug", gf.reports_per_bug, "Report volume per true bug (corpus)")
      ->capture_default_str();
  gen->add_option("--workers", gf.workers, "Crowdworkers per task")->capture_default_str();
  gen->add_option("--invalid-rate", gf.invalid_rate, "Fraction of non-bug reports")->capture_default_str();
  gen->add_option("--inter-arrival", gf.inter_arrival, "Mean seconds between reports")->capture_default_str();
  gen->add_option("--seed", gf.seed, "RNG seed")->capture_default_str();
  gen->add_option("--format", gf.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();

  ReplayFlags rf;
  double speed = 0.0;
  auto* rep = app.add_subcommand("replay", "Feed a report log through the pipeline");
  rep->add_option("input", rf.input, "Report log (CSV/JSONL) or directory")->required();
  rep->add_option("--speed", speed, "Wall-clock speed-up over report timestamps; omit for instant");
  rep->add_option("--events", rf.events, "Write every event as JSON lines here");
  rep->add_option("--task", rf.task, "Only this task");
  rep->add_option("--decisions", rf.decisions, "Write a decision record per capture here");
  rep->add_option("--forecasts", rf.forecasts, "Write a forecast record per window here");
  rep->add_option("--target", rf.target, "Objective for forecast records")->capture_default_str();
  rep->add_option("--quality", rf.quality, "Quality benchmark for decision records")->capture_default_str();
  rep->add_option("--cost", rf.cost, "Cost benchmark for decision records")->capture_default_str();

  EvaluateFlags ef;
  auto* evl = app.add_subcommand("evaluate", "Checkpoint error tables and close-automation metrics");
  evl->add_option("input", ef.input, "Report log or directory of completed tasks")->required();
  evl->add_option("--out", ef.out, "Output directory")->required();
  evl->add_option("--kind", ef.kind, "report, bug, close or all")
      ->check(CLI::IsMember({"report", "bug", "close", "all"}))
      ->capture_default_str();
  evl->add_option("--estimators", ef.estimators, "CRC estimators to evaluate")->delimiter(',');
  evl->add_option("--baselines", ef.baselines, "Rayleigh, Naive")->delimiter(',');
  evl->add_option("--targets", ef.targets, "Close criteria to evaluate")->delimiter(',');

  TuneFlags tf;
  auto* tune = app.add_subcommand("tune", "Select smpSize by repeated 2/3 subsets");
  tune->add_option("input", tf.input, "Report log or directory")->required();
  tune->add_option("--min", tf.min, "Smallest candidate")->capture_default_str();
  tune->add_option("--max", tf.max, "Largest candidate")->capture_default_str();
  tune->add_option("--reps", tf.reps, "Repetitions")->capture_default_str();
  tune->add_option("--seed", tf.seed, "Subset RNG seed")->capture_default_str();

  ServeFlags sf;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--host", sf.host, "Bind address")->capture_default_str();
  serve->add_option("--port", sf.port, "Port (0 picks one)")->capture_default_str();
  serve->add_option("--data-dir", sf.data_dir, "Event-log directory; empty keeps tasks in memory");

  PredictFlags pr;
  auto* pred = app.add_subcommand("predict", "One-shot prediction on a report log");
  pred->add_option("input", pr.input, "Report log")->required();
  pred->add_option("--task", pr.task, "Only this task");
  pred->add_option("--target", pr.target, "Objective for the cost forecast")->capture_default_str();
  pred->add_option("--quality", pr.quality, "Quality benchmark")->capture_default_str();
  pred->add_option("--cost", pr.cost, "Cost benchmark (extra reports)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    spdlog::set_level(spdlog::level::from_str(log_level));
    if (*gen) return run_generate(gf);
    if (*rep) {
      if (speed > 0) rf.speed = speed;
      return run_replay(rf, pf.config());
    }
    if (*evl) return run_evaluate(ef, pf, app.count("--smp-size") > 0);
    if (*tune) {
      tf.estimator = pf.estimator;
      return run_tune(tf);
    }
    if (*serve) return run_serve(sf, pf.config());
    if (*pred) return run_predict(pr, pf.config());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}

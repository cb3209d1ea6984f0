#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvsvm/search.hpp"

namespace cvsvm {

// Method identifiers as they appear in configs and reports.
inline constexpr const char* kMethodCvSvm = "cv-svm";      // hinge upper level
inline constexpr const char* kMethodCvLsSvm = "cv-ls-svm"; // squared upper level
inline constexpr const char* kMethodL1Svm = "l1-svm";
inline constexpr const char* kMethodSvmRfe = "svm-rfe";

struct ExperimentConfig {
  int p = 20;
  int n_train = 100;
  int n_total = 20000;
  std::vector<double> snr_list = {0.25, 1.0, 4.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int k_folds = 5;
  std::vector<double> gamma_grid = {100, 300, 500, 700, 1000};
  std::vector<double> c_grid = {0.001, 0.01, 0.1, 1, 10, 100, 1000};
  std::vector<std::string> methods = {kMethodCvSvm, kMethodCvLsSvm, kMethodL1Svm,
                                      kMethodSvmRfe};
  SearchMode search_mode = SearchMode::kExhaustive;
  double budget_seconds = 300.0;
  int threads = 0;  // 0 = hardware
  std::optional<std::pair<int, int>> cardinality_bounds;
  bool record_trace = true;
  bool standardize = false;
  bool gamma_per_seed = false;  // select gamma per seed instead of averaged over seeds
  bool c_per_seed = false;      // tune C per seed instead of averaged over seeds
  int local_restarts = 20;
  std::string output_dir = "cvsvm-out";
  bool quick = false;  // shrink the test pool to 1900 samples

  void validate() const;
};

// Flat "key = value" document; '#' starts a comment, lists are comma separated.
// Unknown keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& config);

struct MetricStats {
  double mean = 0.0;
  double stderr_of_mean = 0.0;  // sample stddev / sqrt(#seeds)
};

// One (snr, method, seed) cell.
struct CellResult {
  double snr = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;

  double auc = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  int nonzeros = 0;
  double wall_seconds = 0.0;
  bool completed = true;

  FeatureMask mask;
  std::vector<double> weights;
  double bias = 0.0;
  double gamma = 0.0;       // CV methods
  double c = 0.0;           // L1
  double cv_objective_value = 0.0;
  std::vector<TracePoint> trace;
};

struct AggregateRow {
  double snr = 0.0;
  std::string method;
  int seeds_ok = 0;
  MetricStats auc, f1, nonzeros, wall;
};

struct GammaReport {
  std::string method;
  double snr = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_objective;
  double chosen_gamma = 0.0;
};

struct CReport {
  double snr = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_accuracy;  // over seeds and folds
  double chosen_c = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  int effective_n_total = 0;
  std::vector<CellResult> cells;
  std::vector<AggregateRow> aggregates;
  std::vector<GammaReport> gamma_reports;
  std::vector<CReport> c_reports;
  std::string kernel_backend;
  int threads_used = 0;
  bool single_seed_warning = false;
};

// Executes the full (snr x method x seed) grid deterministically and writes report.json,
// the per-metric CSVs, model JSONs, and incumbent traces under config.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& config);

// The plot-ready files: auc.csv / f1.csv / nonzeros.csv / runtime.csv with rows
// "snr,method,mean,stderr", plus one trace CSV per (method, snr, seed).
void emit_plot_data(const ExperimentReport& report, const std::string& dir);

// Timing-free JSON image of the report (deterministic across runs).
nlohmann::json report_json(const ExperimentReport& report);

}  // namespace cvsvm

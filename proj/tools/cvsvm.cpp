// cvsvm: exact best-subset feature selection for linear SVM classification by
// cross-validation, with an experiment harness for synthetic benchmarks.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvsvm/errors.hpp"
#include "cvsvm/experiment.hpp"
#include "cvsvm/kernels.hpp"
#include "cvsvm/metrics.hpp"
#include "cvsvm/serialize.hpp"

namespace {

int env_threads() {
  if (const char* v = std::getenv("CVSVM_THREADS")) {
    const int t = std::atoi(v);
    if (t > 0) return t;
  }
  return 0;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const cvsvm::invalid_parameter_error*>(&e)) return "invalid_parameter";
  if (dynamic_cast<const cvsvm::numeric_error*>(&e)) return "numeric";
  if (dynamic_cast<const cvsvm::undefined_metric_error*>(&e)) return "undefined_metric";
  if (dynamic_cast<const cvsvm::contract_violation_error*>(&e)) return "contract_violation";
  return "error";
}

void emit_error_json(const std::exception& e) {
  nlohmann::json j;
  j["error"] = {{"type", error_kind(e)}, {"message", e.what()}};
  std::cerr << j.dump() << std::endl;
}

int cmd_run(const std::string& config_path, const std::string& out_override, int threads,
            bool quick) {
  cvsvm::ExperimentConfig cfg = cvsvm::load_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (threads > 0) cfg.threads = threads;
  else if (cfg.threads <= 0) cfg.threads = env_threads();
  if (quick) cfg.quick = true;

  const cvsvm::ExperimentReport report = cvsvm::run_experiment(cfg);

  int failed_cells = 0;
  for (const auto& cell : report.cells) failed_cells += cell.failed ? 1 : 0;
  std::cout << "wrote " << cfg.output_dir << " (" << report.cells.size() << " cells, "
            << failed_cells << " failed)\n";
  for (const auto& row : report.aggregates) {
    std::cout << "snr=" << cvsvm::format_double(row.snr) << " " << row.method
              << ": auc=" << row.auc.mean << " f1=" << row.f1.mean
              << " nonzeros=" << row.nonzeros.mean << " wall_s=" << row.wall.mean << "\n";
  }
  if (failed_cells > 0) {
    nlohmann::json j;
    j["error"] = {{"type", "cell_failures"},
                  {"message", std::to_string(failed_cells) + " of " +
                                  std::to_string(report.cells.size()) +
                                  " cells failed; see report.json"}};
    std::cerr << j.dump() << std::endl;
    return 1;
  }
  return 0;
}

int cmd_gen(int p, int n, double snr, std::uint64_t seed, const std::string& prefix) {
  const cvsvm::Dataset ds = cvsvm::generate_dataset(p, n, snr, seed);
  cvsvm::save_dataset(ds, prefix + ".csv", prefix + ".json");
  std::cout << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  return 0;
}

int cmd_search(const std::string& prefix, int n_train, double gamma,
               const std::string& loss, int k_folds, const std::string& mode,
               double budget, int threads, int restarts, const std::string& trace_path,
               const std::string& model_path) {
  cvsvm::Dataset ds = cvsvm::load_dataset(prefix + ".csv", prefix + ".json");
  const int n = n_train > 0 ? n_train : static_cast<int>(ds.n());
  if (n > static_cast<int>(ds.n()))
    throw cvsvm::invalid_parameter_error("--n-train exceeds dataset size");

  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  const cvsvm::Matrix x = cvsvm::gather_rows(ds.features, idx);
  const std::vector<double> y(ds.labels.begin(), ds.labels.begin() + n);
  const cvsvm::FoldPartition folds = cvsvm::partition_folds(n, k_folds, ds.seed);

  cvsvm::SearchConfig cfg;
  cfg.wall_clock_budget_s = budget;
  cfg.worker_count = threads > 0 ? threads : env_threads();
  cfg.rng_seed = ds.seed;
  const cvsvm::LossKind kind = cvsvm::loss_kind_from_name(loss);

  cvsvm::SearchResult res;
  if (mode == "exhaustive") {
    res = cvsvm::exhaustive_search(x, y, folds, gamma, kind, cfg);
  } else if (mode == "local") {
    res = cvsvm::local_search(x, y, folds, gamma, kind, cfg, restarts);
  } else {
    throw cvsvm::invalid_parameter_error("--mode must be exhaustive or local");
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    cvsvm::write_trace_csv(res.incumbent_trace, out);
  }
  const cvsvm::FinalModel final = cvsvm::average_fold_models(res.best_evaluation);
  if (!model_path.empty()) {
    std::ofstream out(model_path);
    nlohmann::json j = cvsvm::final_model_json(final);
    j["gamma"] = gamma;
    j["loss"] = loss;
    j["cv_objective"] = res.best_objective;
    out << j.dump(2) << "\n";
  }

  nlohmann::json summary;
  summary["mask"] = res.best_mask.to_string();
  summary["objective"] = res.best_objective;
  summary["masks_evaluated"] = res.masks_evaluated;
  summary["completed"] = res.completed;
  summary["wall_seconds"] = res.wall_seconds;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_kernels() {
  nlohmann::json j;
  j["active"] = cvsvm::kernels::active_ops().name;
  nlohmann::json avail = nlohmann::json::array();
  avail.push_back(cvsvm::kernels::scalar_ops().name);
  if (cvsvm::kernels::avx2_ops()) avail.push_back(cvsvm::kernels::avx2_ops()->name);
  if (cvsvm::kernels::neon_ops()) avail.push_back(cvsvm::kernels::neon_ops()->name);
  j["available"] = std::move(avail);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"best-subset feature selection for linear SVM via cross-validation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a full experiment from a config file");
  std::string config_path, out_override;
  int run_threads = 0;
  bool quick = false;
  run->add_option("--config", config_path, "key = value config file")->required();
  run->add_option("--out", out_override, "output directory (overrides config)");
  run->add_option("--threads", run_threads, "worker threads (overrides config and env)");
  run->add_flag("--quick", quick, "shrink the test pool to 1900 samples for fast runs");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset (csv + json sidecar)");
  int gen_p = 20, gen_n = 20000;
  double gen_snr = 1.0;
  std::uint64_t gen_seed = 1;
  std::string gen_prefix = "dataset";
  gen->add_option("--p", gen_p, "number of features")->required();
  gen->add_option("--n", gen_n, "number of samples")->required();
  gen->add_option("--snr", gen_snr, "signal-to-noise ratio")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", gen_prefix, "output path prefix")->required();

  // search
  auto* search = app.add_subcommand("search", "find the best feature subset on a dataset");
  std::string data_prefix, loss = "squared", mode = "exhaustive", trace_path, model_path;
  int n_train = 0, k_folds = 5, search_threads = 0, restarts = 20;
  double gamma = 100.0, budget = 300.0;
  search->add_option("--data", data_prefix, "dataset path prefix (expects .csv/.json)")
      ->required();
  search->add_option("--n-train", n_train, "rows used for training (default: all)");
  search->add_option("--gamma", gamma, "loss weight of the fold trainer")->required();
  search->add_option("--loss", loss, "hinge | squared");
  search->add_option("--k", k_folds, "number of folds");
  search->add_option("--mode", mode, "exhaustive | local");
  search->add_option("--budget", budget, "wall-clock budget in seconds");
  search->add_option("--threads", search_threads, "worker threads");
  search->add_option("--restarts", restarts, "local-search restarts");
  search->add_option("--trace", trace_path, "write incumbent trace csv here");
  search->add_option("--model", model_path, "write fold-averaged model json here");

  // kernels
  auto* kernels_cmd = app.add_subcommand("kernels", "report the dispatched SIMD backend");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_override, run_threads, quick);
    if (gen->parsed()) return cmd_gen(gen_p, gen_n, gen_snr, gen_seed, gen_prefix);
    if (search->parsed())
      return cmd_search(data_prefix, n_train, gamma, loss, k_folds, mode, budget,
                        search_threads, restarts, trace_path, model_path);
    if (kernels_cmd->parsed()) return cmd_kernels();
  } catch (const std::exception& e) {
    emit_error_json(e);
    return 1;
  }
  return 0;
}

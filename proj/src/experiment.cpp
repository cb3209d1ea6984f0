#include "cvsvm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvsvm/baselines.hpp"
#include "cvsvm/kernels.hpp"
#include "cvsvm/metrics.hpp"
#include "cvsvm/serialize.hpp"

namespace cvsvm {

namespace {

using Clock = std::chrono::steady_clock;

bool is_cv_method(const std::string& m) { return m == kMethodCvSvm || m == kMethodCvLsSvm; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw invalid_parameter_error("config: bad number for " + key + ": " + v);
  return d;
}

long long parse_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long long d = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw invalid_parameter_error("config: bad integer for " + key + ": " + v);
  return d;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw invalid_parameter_error("config: bad boolean for " + key + ": " + v);
}

std::string snr_tag(double snr) { return format_double(snr); }

double sample_mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

MetricStats stats_of(std::span<const double> v) {
  MetricStats st;
  st.mean = sample_mean(v);
  if (v.size() >= 2) {
    double ss = 0.0;
    for (double x : v) ss += (x - st.mean) * (x - st.mean);
    st.stderr_of_mean =
        std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return st;
}

struct SeedData {
  CvInstance train;
  Matrix test_x;
  std::vector<double> test_y;
  FeatureMask z_star;
  std::uint64_t seed = 0;
};

void score_cell(CellResult& cell, std::span<const double> weights, double bias,
                const FeatureMask& mask, const SeedData& sd) {
  const auto scores = decision_values(weights, bias, sd.test_x);
  cell.auc = auc(scores, sd.test_y);
  const FeatureRecovery rec = feature_recovery(mask, sd.z_star);
  cell.f1 = rec.f1;
  cell.precision = rec.precision;
  cell.recall = rec.recall;
  cell.nonzeros = rec.nonzeros;
  cell.mask = mask;
  cell.weights.assign(weights.begin(), weights.end());
  cell.bias = bias;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (p < 1) throw invalid_parameter_error("config: p must be >= 1");
  if (n_train < 1) throw invalid_parameter_error("config: n_train must be >= 1");
  if (n_train >= n_total)
    throw invalid_parameter_error("config: n_train must be < n_total (a test pool is required)");
  if (snr_list.empty()) throw invalid_parameter_error("config: snr_list must be nonempty");
  for (double s : snr_list)
    if (!(s > 0.0)) throw invalid_parameter_error("config: snr values must be > 0");
  if (seeds.empty()) throw invalid_parameter_error("config: seeds must be nonempty");
  if (k_folds < 2 || k_folds > n_train)
    throw invalid_parameter_error("config: need 2 <= k_folds <= n_train");
  for (const auto& m : methods) {  // empty set is allowed: run emits headers-only files
    if (m != kMethodCvSvm && m != kMethodCvLsSvm && m != kMethodL1Svm && m != kMethodSvmRfe)
      throw invalid_parameter_error("config: unknown method " + m);
  }
  for (double g : gamma_grid)
    if (!(g > 0.0)) throw invalid_parameter_error("config: gamma grid must be positive");
  for (double c : c_grid)
    if (!(c > 0.0)) throw invalid_parameter_error("config: C grid must be positive");
  const bool needs_gamma = std::any_of(methods.begin(), methods.end(),
                                       [](const std::string& m) { return is_cv_method(m); });
  if (needs_gamma && gamma_grid.empty())
    throw invalid_parameter_error("config: gamma_grid must be nonempty for CV methods");
  if (std::find(methods.begin(), methods.end(), kMethodL1Svm) != methods.end() &&
      c_grid.empty())
    throw invalid_parameter_error("config: c_grid must be nonempty for l1-svm");
  if (!(budget_seconds > 0.0)) throw invalid_parameter_error("config: budget must be > 0");
  if (local_restarts < 1) throw invalid_parameter_error("config: local_restarts must be >= 1");
  if (cardinality_bounds) {
    const auto [lo, hi] = *cardinality_bounds;
    if (lo < 0 || lo > hi || hi > p)
      throw invalid_parameter_error("config: invalid cardinality bounds");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  int card_min = -1, card_max = -1;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw invalid_parameter_error("config: expected key = value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "p") cfg.p = static_cast<int>(parse_int(key, value));
    else if (key == "n_train") cfg.n_train = static_cast<int>(parse_int(key, value));
    else if (key == "n_total") cfg.n_total = static_cast<int>(parse_int(key, value));
    else if (key == "k_folds") cfg.k_folds = static_cast<int>(parse_int(key, value));
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
    else if (key == "local_restarts")
      cfg.local_restarts = static_cast<int>(parse_int(key, value));
    else if (key == "budget_seconds") cfg.budget_seconds = parse_double(key, value);
    else if (key == "snr_list") {
      cfg.snr_list.clear();
      for (const auto& s : split_list(value)) cfg.snr_list.push_back(parse_double(key, s));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& s : split_list(value))
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(key, s)));
    } else if (key == "gamma_grid") {
      cfg.gamma_grid.clear();
      for (const auto& s : split_list(value)) cfg.gamma_grid.push_back(parse_double(key, s));
    } else if (key == "c_grid") {
      cfg.c_grid.clear();
      for (const auto& s : split_list(value)) cfg.c_grid.push_back(parse_double(key, s));
    } else if (key == "methods") {
      cfg.methods = split_list(value);
    } else if (key == "search_mode") {
      if (value == "exhaustive") cfg.search_mode = SearchMode::kExhaustive;
      else if (value == "local") cfg.search_mode = SearchMode::kLocalSearch;
      else throw invalid_parameter_error("config: search_mode must be exhaustive or local");
    } else if (key == "cardinality_min") card_min = static_cast<int>(parse_int(key, value));
    else if (key == "cardinality_max") card_max = static_cast<int>(parse_int(key, value));
    else if (key == "record_trace") cfg.record_trace = parse_bool(key, value);
    else if (key == "standardize") cfg.standardize = parse_bool(key, value);
    else if (key == "gamma_per_seed") cfg.gamma_per_seed = parse_bool(key, value);
    else if (key == "c_per_seed") cfg.c_per_seed = parse_bool(key, value);
    else if (key == "quick") cfg.quick = parse_bool(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw invalid_parameter_error("config: unknown key " + key);
  }
  if ((card_min >= 0) != (card_max >= 0))
    throw invalid_parameter_error("config: cardinality_min/max must be given together");
  if (card_min >= 0) cfg.cardinality_bounds = std::make_pair(card_min, card_max);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_parameter_error("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto list = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, std::string>)
        s += v[i];
      else if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, std::uint64_t>)
        s += std::to_string(v[i]);
      else
        s += format_double(v[i]);
    }
    return s;
  };
  out << "p = " << cfg.p << "\n";
  out << "n_train = " << cfg.n_train << "\n";
  out << "n_total = " << cfg.n_total << "\n";
  out << "snr_list = " << list(cfg.snr_list) << "\n";
  out << "seeds = " << list(cfg.seeds) << "\n";
  out << "k_folds = " << cfg.k_folds << "\n";
  out << "gamma_grid = " << list(cfg.gamma_grid) << "\n";
  out << "c_grid = " << list(cfg.c_grid) << "\n";
  out << "methods = " << list(cfg.methods) << "\n";
  out << "search_mode = "
      << (cfg.search_mode == SearchMode::kExhaustive ? "exhaustive" : "local") << "\n";
  out << "budget_seconds = " << format_double(cfg.budget_seconds) << "\n";
  out << "threads = " << cfg.threads << "\n";
  if (cfg.cardinality_bounds) {
    out << "cardinality_min = " << cfg.cardinality_bounds->first << "\n";
    out << "cardinality_max = " << cfg.cardinality_bounds->second << "\n";
  }
  out << "record_trace = " << (cfg.record_trace ? "true" : "false") << "\n";
  out << "standardize = " << (cfg.standardize ? "true" : "false") << "\n";
  out << "gamma_per_seed = " << (cfg.gamma_per_seed ? "true" : "false") << "\n";
  out << "c_per_seed = " << (cfg.c_per_seed ? "true" : "false") << "\n";
  out << "local_restarts = " << cfg.local_restarts << "\n";
  out << "quick = " << (cfg.quick ? "true" : "false") << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  return out.str();
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();

  ExperimentReport report;
  report.config = config;
  report.kernel_backend = kernels::active_ops().name;
  report.threads_used = config.threads;
  report.single_seed_warning = config.seeds.size() < 2;
  report.effective_n_total =
      config.quick ? std::min(config.n_total, config.n_train + 1900) : config.n_total;

  SearchConfig search_cfg;
  search_cfg.mode = config.search_mode;
  search_cfg.wall_clock_budget_s = config.budget_seconds;
  search_cfg.worker_count = config.threads;
  search_cfg.cardinality_bounds = config.cardinality_bounds;
  search_cfg.record_trace = config.record_trace;
  search_cfg.local_restarts = config.local_restarts;

  for (double snr : config.snr_list) {
    // All seeds of this SNR level up front; gamma selection couples them.
    std::vector<SeedData> seed_data;
    seed_data.reserve(config.seeds.size());
    std::vector<CvInstance> instances;
    instances.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds) {
      Dataset ds = generate_dataset(config.p, report.effective_n_total, snr, seed);
      if (config.standardize)
        standardize_columns(ds.features, static_cast<std::size_t>(config.n_train));

      SeedData sd;
      sd.seed = seed;
      std::vector<int> train_idx(static_cast<std::size_t>(config.n_train));
      for (int i = 0; i < config.n_train; ++i) train_idx[static_cast<std::size_t>(i)] = i;
      std::vector<int> test_idx;
      for (int i = config.n_train; i < report.effective_n_total; ++i) test_idx.push_back(i);

      sd.train.x = gather_rows(ds.features, train_idx);
      sd.train.y.assign(ds.labels.begin(), ds.labels.begin() + config.n_train);
      sd.train.folds =
          partition_folds(config.n_train, config.k_folds, seed);  // fold seed = dataset seed
      sd.test_x = gather_rows(ds.features, test_idx);
      sd.test_y.assign(ds.labels.begin() + config.n_train, ds.labels.end());
      sd.z_star = mask_from_weights(*ds.true_coefficients);
      instances.push_back(sd.train);
      seed_data.push_back(std::move(sd));
    }

    for (const auto& method : config.methods) {
      if (is_cv_method(method)) {
        const LossKind kind = method == std::string(kMethodCvSvm) ? LossKind::kHinge
                                                                  : LossKind::kSquared;
        SearchConfig cfg = search_cfg;
        cfg.rng_seed = config.seeds.front();
        GammaSelection sel;
        bool method_failed = false;
        std::string method_error;
        try {
          sel = select_gamma(instances, config.gamma_grid, kind, cfg);
          GammaReport gr;
          gr.method = method;
          gr.snr = snr;
          gr.grid = sel.grid;
          gr.mean_objective = sel.per_gamma_mean_objective;
          gr.chosen_gamma = sel.chosen_gamma;
          report.gamma_reports.push_back(std::move(gr));
        } catch (const std::exception& e) {
          method_failed = true;
          method_error = e.what();
        }

        for (std::size_t si = 0; si < config.seeds.size(); ++si) {
          CellResult cell;
          cell.snr = snr;
          cell.method = method;
          cell.seed = config.seeds[si];
          if (method_failed) {
            cell.failed = true;
            cell.error = method_error;
            report.cells.push_back(std::move(cell));
            continue;
          }
          try {
            std::size_t gi = sel.chosen_index;
            if (config.gamma_per_seed) {
              for (std::size_t g = 0; g < sel.grid.size(); ++g) {
                const double cur = sel.results[g][si].best_objective;
                const double best = sel.results[gi][si].best_objective;
                if (cur < best || (cur == best && sel.grid[g] < sel.grid[gi])) gi = g;
              }
            }
            const SearchResult& res = sel.results[gi][si];
            const FinalModel final = average_fold_models(res.best_evaluation);
            score_cell(cell, final.weights, final.bias, final.mask, seed_data[si]);
            cell.gamma = sel.grid[gi];
            cell.cv_objective_value = res.best_objective;
            cell.completed = res.completed;
            cell.wall_seconds = res.wall_seconds;
            cell.trace = res.incumbent_trace;
          } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
          }
          report.cells.push_back(std::move(cell));
        }
      } else if (method == std::string(kMethodL1Svm)) {
        // Accuracy per (seed, C) from per-seed tuning passes; unless c_per_seed is set,
        // one C is chosen by the accuracy averaged over seeds and every seed retrains
        // with it.
        std::vector<L1TuneResult> tuned_by_seed(config.seeds.size());
        std::vector<double> tune_seconds(config.seeds.size(), 0.0);
        bool tuning_failed = false;
        std::string tuning_error;
        try {
          for (std::size_t si = 0; si < config.seeds.size(); ++si) {
            const auto t0 = Clock::now();
            tuned_by_seed[si] = tune_l1_svm(seed_data[si].train.x, seed_data[si].train.y,
                                            config.c_grid, config.k_folds,
                                            seed_data[si].seed);
            tune_seconds[si] = std::chrono::duration<double>(Clock::now() - t0).count();
          }
        } catch (const std::exception& e) {
          tuning_failed = true;
          tuning_error = e.what();
        }

        double shared_c = 0.0;
        if (!tuning_failed && !config.c_per_seed) {
          CReport cr;
          cr.snr = snr;
          cr.grid = config.c_grid;
          cr.mean_accuracy.assign(config.c_grid.size(), 0.0);
          for (const auto& t : tuned_by_seed)
            for (std::size_t g = 0; g < config.c_grid.size(); ++g)
              cr.mean_accuracy[g] += t.mean_accuracy_by_c[g];
          for (auto& a : cr.mean_accuracy) a /= static_cast<double>(config.seeds.size());
          std::size_t best = 0;
          for (std::size_t g = 1; g < config.c_grid.size(); ++g) {
            const double cur = cr.mean_accuracy[g];
            const double top = cr.mean_accuracy[best];
            if (cur > top || (cur == top && config.c_grid[g] < config.c_grid[best]))
              best = g;
          }
          shared_c = config.c_grid[best];
          cr.chosen_c = shared_c;
          report.c_reports.push_back(std::move(cr));
        }

        for (std::size_t si = 0; si < config.seeds.size(); ++si) {
          const SeedData& sd = seed_data[si];
          CellResult cell;
          cell.snr = snr;
          cell.method = method;
          cell.seed = sd.seed;
          if (tuning_failed) {
            cell.failed = true;
            cell.error = tuning_error;
            report.cells.push_back(std::move(cell));
            continue;
          }
          try {
            const auto t0 = Clock::now();
            const L1SvmModel model =
                config.c_per_seed
                    ? tuned_by_seed[si].model
                    : train_l1_svm(sd.train.x, sd.train.y, shared_c);
            cell.wall_seconds = tune_seconds[si] +
                                std::chrono::duration<double>(Clock::now() - t0).count();
            const FeatureMask mask = mask_from_weights(model.weights);
            score_cell(cell, model.weights, model.bias, mask, sd);
            cell.c = config.c_per_seed ? tuned_by_seed[si].c_star : shared_c;
            cell.completed = model.converged;
          } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
          }
          report.cells.push_back(std::move(cell));
        }
      } else {  // svm-rfe
        for (std::size_t si = 0; si < config.seeds.size(); ++si) {
          const SeedData& sd = seed_data[si];
          CellResult cell;
          cell.snr = snr;
          cell.method = method;
          cell.seed = sd.seed;
          try {
            const auto t0 = Clock::now();
            const RfeResult rfe = svm_rfe(sd.train.x, sd.train.y, config.k_folds, sd.seed);
            const L2SvmModel final =
                train_l2sq_svm(sd.train.x, sd.train.y, 1.0, &rfe.chosen_mask);
            cell.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            score_cell(cell, final.weights, final.bias, rfe.chosen_mask, sd);
            cell.completed = final.converged;
          } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
          }
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }

  // Aggregation over seeds, in config order.
  for (double snr : config.snr_list) {
    for (const auto& method : config.methods) {
      AggregateRow row;
      row.snr = snr;
      row.method = method;
      std::vector<double> aucs, f1s, nzs, walls;
      for (const auto& cell : report.cells) {
        if (cell.snr != snr || cell.method != method || cell.failed) continue;
        aucs.push_back(cell.auc);
        f1s.push_back(cell.f1);
        nzs.push_back(static_cast<double>(cell.nonzeros));
        walls.push_back(cell.wall_seconds);
      }
      row.seeds_ok = static_cast<int>(aucs.size());
      row.auc = stats_of(aucs);
      row.f1 = stats_of(f1s);
      row.nonzeros = stats_of(nzs);
      row.wall = stats_of(walls);
      report.aggregates.push_back(std::move(row));
    }
  }

  // Outputs.
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  {
    std::ofstream out(config.output_dir + "/report.json");
    out << report_json(report).dump(2) << "\n";
  }
  emit_plot_data(report, config.output_dir);

  fs::create_directories(config.output_dir + "/models");
  for (const auto& cell : report.cells) {
    if (cell.failed) continue;
    nlohmann::json j;
    j["method"] = cell.method;
    j["mask"] = cell.mask.to_string();
    j["weights"] = cell.weights;
    j["bias"] = cell.bias;
    if (is_cv_method(cell.method)) j["gamma"] = cell.gamma;
    if (cell.method == std::string(kMethodL1Svm)) j["C"] = cell.c;
    j["dataset"] = {{"p", config.p},
                    {"n_total", report.effective_n_total},
                    {"n_train", config.n_train},
                    {"snr", cell.snr},
                    {"seed", cell.seed},
                    {"standardize", config.standardize}};
    std::ofstream out(config.output_dir + "/models/model_" + cell.method + "_snr" +
                      snr_tag(cell.snr) + "_seed" + std::to_string(cell.seed) + ".json");
    out << j.dump(2) << "\n";
  }
  return report;
}

void emit_plot_data(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  const struct {
    const char* file;
    MetricStats AggregateRow::* stats;
  } metric_files[] = {
      {"auc.csv", &AggregateRow::auc},
      {"f1.csv", &AggregateRow::f1},
      {"nonzeros.csv", &AggregateRow::nonzeros},
      {"runtime.csv", &AggregateRow::wall},
  };
  for (const auto& mf : metric_files) {
    std::ofstream out(dir + "/" + std::string(mf.file));
    out << "snr,method,mean,stderr\n";
    for (const auto& row : report.aggregates) {
      const MetricStats& st = row.*(mf.stats);
      out << format_double(row.snr) << ',' << row.method << ',' << format_double(st.mean)
          << ',' << format_double(st.stderr_of_mean) << "\n";
    }
  }

  if (report.config.record_trace) {
    fs::create_directories(dir + "/traces");
    for (const auto& cell : report.cells) {
      if (cell.failed || cell.trace.empty()) continue;
      std::ofstream out(dir + "/traces/trace_" + cell.method + "_snr" + snr_tag(cell.snr) +
                        "_seed" + std::to_string(cell.seed) + ".csv");
      write_trace_csv(cell.trace, out);
    }
  }
}

nlohmann::json report_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["config"] = config_to_text(report.config);
  j["effective_n_total"] = report.effective_n_total;
  j["environment"] = {{"kernel_backend", report.kernel_backend},
                      {"threads", report.threads_used}};
  if (report.single_seed_warning)
    j["warnings"] = {"single seed: standard errors are reported as 0"};

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json cj;
    cj["snr"] = cell.snr;
    cj["method"] = cell.method;
    cj["seed"] = cell.seed;
    if (cell.failed) {
      cj["failed"] = true;
      cj["error"] = cell.error;
    } else {
      cj["auc"] = cell.auc;
      cj["f1"] = cell.f1;
      cj["precision"] = cell.precision;
      cj["recall"] = cell.recall;
      cj["nonzeros"] = cell.nonzeros;
      cj["mask"] = cell.mask.to_string();
      cj["completed"] = cell.completed;
      if (is_cv_method(cell.method)) {
        cj["gamma"] = cell.gamma;
        cj["cv_objective"] = cell.cv_objective_value;
      }
      if (cell.method == std::string(kMethodL1Svm)) cj["C"] = cell.c;
    }
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);

  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& row : report.aggregates) {
    aggs.push_back({{"snr", row.snr},
                    {"method", row.method},
                    {"seeds_ok", row.seeds_ok},
                    {"auc_mean", row.auc.mean},
                    {"auc_stderr", row.auc.stderr_of_mean},
                    {"f1_mean", row.f1.mean},
                    {"f1_stderr", row.f1.stderr_of_mean},
                    {"nonzeros_mean", row.nonzeros.mean},
                    {"nonzeros_stderr", row.nonzeros.stderr_of_mean}});
  }
  j["aggregates"] = std::move(aggs);

  nlohmann::json gammas = nlohmann::json::array();
  for (const auto& gr : report.gamma_reports) {
    gammas.push_back({{"method", gr.method},
                      {"snr", gr.snr},
                      {"grid", gr.grid},
                      {"mean_objective", gr.mean_objective},
                      {"chosen_gamma", gr.chosen_gamma}});
  }
  j["gamma_selection"] = std::move(gammas);

  nlohmann::json cs = nlohmann::json::array();
  for (const auto& cr : report.c_reports) {
    cs.push_back({{"snr", cr.snr},
                  {"grid", cr.grid},
                  {"mean_accuracy", cr.mean_accuracy},
                  {"chosen_c", cr.chosen_c}});
  }
  j["c_selection"] = std::move(cs);
  return j;
}

}  // namespace cvsvm

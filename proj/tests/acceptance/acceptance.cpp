// Acceptance suite: runs every release criterion end to end and prints one PASS/FAIL
// line per criterion. Exit status is the number of failed criteria.
//
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cvsvm/experiment.hpp"
#include "cvsvm/metrics.hpp"
#include "cvsvm/rng.hpp"
#include "cvsvm/serialize.hpp"
#include "oracles.hpp"

using namespace cvsvm;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << "  violated: " << what << "\n";
    }
  }
  void note(const std::string& line) { detail << "  " << line << "\n"; }
};

struct Instance {
  Matrix x;
  std::vector<double> y;
  FoldPartition folds;
};

Instance random_instance(std::uint64_t seed, int n, int p, int k) {
  NormalStream normals(seed);
  Instance inst;
  inst.x = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  for (auto& v : inst.x.data) v = normals.next();
  inst.y.resize(static_cast<std::size_t>(n));
  for (auto& v : inst.y) v = normals.rng().next_unit() < 0.5 ? -1.0 : 1.0;
  if (k > 0) inst.folds = partition_folds(n, k, seed + 1);
  return inst;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("missing file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const AggregateRow& find_row(const ExperimentReport& report, double snr,
                             const std::string& method) {
  for (const auto& row : report.aggregates)
    if (row.snr == snr && row.method == method) return row;
  throw std::runtime_error("missing aggregate row");
}

// ---------------------------------------------------------------------------------
// 1. Search exactness against the brute-force loop.
void criterion_oracle_equivalence(Check& c) {
  Xoshiro256pp rng(20250801);
  int done = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 4 + static_cast<int>(rng.next_below(7));  // 4..10
    const Instance inst = random_instance(4000 + static_cast<std::uint64_t>(trial), 30, p, 3);
    const double gamma = trial % 2 == 0 ? 100.0 : 1000.0;
    const LossKind kind = trial % 4 < 2 ? LossKind::kHinge : LossKind::kSquared;

    SearchConfig cfg;
    cfg.wall_clock_budget_s = 300.0;
    const SearchResult res = exhaustive_search(inst.x, inst.y, inst.folds, gamma, kind, cfg);
    const auto brute = oracle::brute_force_best_subset(inst.x, inst.y, inst.folds, gamma, kind);

    c.expect(res.completed, "search completed (trial " + std::to_string(trial) + ")");
    c.expect(res.best_mask.to_string() == brute.mask.to_string(),
             "mask equals brute force (trial " + std::to_string(trial) + ": " +
                 res.best_mask.to_string() + " vs " + brute.mask.to_string() + ")");
    c.expect(std::abs(res.best_objective - brute.objective) <= 1e-9,
             "objective within 1e-9 of brute force (trial " + std::to_string(trial) + ")");
    ++done;
  }
  c.note(std::to_string(done) + " instances, p in [4,10], both losses, gamma in {100,1000}");
}

// ---------------------------------------------------------------------------------
// 2. First-order conditions of the closed-form trainer.
void criterion_stationarity(Check& c) {
  Xoshiro256pp rng(8675309);
  const double gammas[] = {0.5, 10.0, 100.0, 1000.0};
  double worst_residual = 0.0, worst_grad = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 10 + static_cast<int>(rng.next_below(51));
    const int p = 1 + static_cast<int>(rng.next_below(10));
    const Instance inst = random_instance(9000 + static_cast<std::uint64_t>(trial), n, p, 0);
    FeatureMask mask(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) mask.set(static_cast<std::size_t>(j), rng.next_unit() < 0.5);
    const double gamma = gammas[rng.next_below(4)];

    const FoldModel model = train_lssvm(inst.x, inst.y, mask, gamma);
    const double residual = stationarity_residual(model, inst.x, inst.y, gamma);
    worst_residual = std::max(worst_residual, residual);
    c.expect(residual <= 1e-8,
             "stationarity residual <= 1e-8 (trial " + std::to_string(trial) + ", got " +
                 format_double(residual) + ")");

    const double fstar =
        lssvm_objective(inst.x, inst.y, model.weights, model.bias, gamma);
    const double grad = oracle::max_numeric_gradient_component(inst.x, inst.y, mask, gamma,
                                                               model.weights, model.bias);
    const double rel = grad / std::max(1.0, std::abs(fstar));
    worst_grad = std::max(worst_grad, rel);
    c.expect(rel <= 1e-5, "numeric gradient <= 1e-5 relative (trial " +
                              std::to_string(trial) + ", got " + format_double(rel) + ")");
  }
  c.note("200 triples; worst residual " + format_double(worst_residual) +
         ", worst relative numeric gradient " + format_double(worst_grad));
}

// ---------------------------------------------------------------------------------
// 3. Strict optimality of the trained point under feasible perturbations.
void criterion_uniqueness(Check& c) {
  Xoshiro256pp rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 12 + static_cast<int>(rng.next_below(30));
    const int p = 1 + static_cast<int>(rng.next_below(8));
    const Instance inst = random_instance(30000 + static_cast<std::uint64_t>(trial), n, p, 0);
    FeatureMask mask(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) mask.set(static_cast<std::size_t>(j), rng.next_unit() < 0.6);
    const double gamma = 10.0 + rng.next_unit() * 990.0;

    const FoldModel model = train_lssvm(inst.x, inst.y, mask, gamma);
    const double fstar = lssvm_objective(inst.x, inst.y, model.weights, model.bias, gamma);
    const auto support = mask.support();

    for (int k = 0; k < 20; ++k) {
      std::vector<double> dir(support.size() + 1);
      double norm = 0.0;
      for (auto& d : dir) {
        d = rng.next_unit() - 0.5;
        norm += d * d;
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      auto w = model.weights;
      for (std::size_t u = 0; u < support.size(); ++u)
        w[static_cast<std::size_t>(support[u])] += 1e-3 * dir[u] / norm;
      const double b = model.bias + 1e-3 * dir.back() / norm;
      const double f = lssvm_objective(inst.x, inst.y, w, b, gamma);
      c.expect(f > fstar, "perturbed objective strictly above the optimum (trial " +
                              std::to_string(trial) + ")");
    }
  }
  c.note("100 instances x 20 feasible perturbations of norm 1e-3");
}

// ---------------------------------------------------------------------------------
// 4. Desk-scale reproduction of the benchmark trends.
void criterion_trends(Check& c, const fs::path& workdir) {
  ExperimentConfig cfg;
  cfg.p = 20;
  cfg.n_train = 100;
  cfg.n_total = 2000;  // 1,900-sample test pool
  cfg.snr_list = {0.25, 1.0, 4.0};
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.k_folds = 5;
  cfg.methods = {kMethodCvSvm, kMethodCvLsSvm, kMethodL1Svm};
  cfg.budget_seconds = 1800.0;
  cfg.record_trace = false;
  cfg.output_dir = (workdir / "trends").string();

  const ExperimentReport report = run_experiment(cfg);
  for (const auto& row : report.aggregates)
    c.expect(row.seeds_ok == 5, row.method + " snr " + format_double(row.snr) +
                                    ": all five seeds succeeded");

  const auto& svm_1 = find_row(report, 1.0, kMethodCvSvm);
  c.expect(svm_1.auc.mean >= 0.70 && svm_1.auc.mean <= 0.84,
           "cv-svm auc at snr 1.0 in [0.70, 0.84], got " + format_double(svm_1.auc.mean));
  c.expect(svm_1.f1.mean >= 0.60 && svm_1.f1.mean <= 0.82,
           "cv-svm f1 at snr 1.0 in [0.60, 0.82], got " + format_double(svm_1.f1.mean));

  const auto& ls_4 = find_row(report, 4.0, kMethodCvLsSvm);
  c.expect(ls_4.f1.mean >= 0.72 && ls_4.f1.mean <= 0.95,
           "cv-ls-svm f1 at snr 4.0 in [0.72, 0.95], got " + format_double(ls_4.f1.mean));
  c.expect(ls_4.nonzeros.mean >= 8.0 && ls_4.nonzeros.mean <= 13.0,
           "cv-ls-svm nonzeros at snr 4.0 in [8, 13], got " +
               format_double(ls_4.nonzeros.mean));

  const auto& svm_025 = find_row(report, 0.25, kMethodCvSvm);
  const auto& ls_025 = find_row(report, 0.25, kMethodCvLsSvm);
  c.expect(svm_025.nonzeros.mean >= 5.0 && svm_025.nonzeros.mean <= 12.0,
           "cv-svm nonzeros at snr 0.25 in [5, 12], got " +
               format_double(svm_025.nonzeros.mean));
  c.expect(ls_025.nonzeros.mean < svm_025.nonzeros.mean,
           "cv-ls-svm under-selects relative to cv-svm at snr 0.25 (" +
               format_double(ls_025.nonzeros.mean) + " vs " +
               format_double(svm_025.nonzeros.mean) + ")");

  double l1_pooled = 0.0;
  for (double snr : cfg.snr_list) {
    const auto& l1 = find_row(report, snr, kMethodL1Svm);
    l1_pooled += l1.nonzeros.mean;
    c.expect(l1.nonzeros.mean >= 15.0, "l1-svm selects >= 15 features at snr " +
                                           format_double(snr) + ", got " +
                                           format_double(l1.nonzeros.mean));
  }
  c.note("l1-svm nonzeros pooled over snr levels: " +
         format_double(l1_pooled / static_cast<double>(cfg.snr_list.size())));

  for (const auto& row : report.aggregates) {
    c.note(row.method + " snr " + format_double(row.snr) + ": auc " +
           format_double(row.auc.mean) + ", f1 " + format_double(row.f1.mean) +
           ", nonzeros " + format_double(row.nonzeros.mean));
  }
}

// ---------------------------------------------------------------------------------
// 5. Full-scale enumeration fits the runtime envelope.
void criterion_performance(Check& c) {
  const Dataset ds = generate_dataset(20, 100, 1.0, 1);
  const FoldPartition folds = partition_folds(100, 5, 1);
  SearchConfig cfg;
  cfg.wall_clock_budget_s = 3600.0;

  const SearchResult squared =
      exhaustive_search(ds.features, ds.labels, folds, 500.0, LossKind::kSquared, cfg);
  c.expect(squared.completed, "squared-loss search covered all 2^20 masks");
  c.expect(squared.masks_evaluated == (1u << 20), "squared-loss search evaluated 2^20 masks");
  c.expect(squared.wall_seconds <= 600.0, "squared-loss search within 10 minutes, took " +
                                              format_double(squared.wall_seconds) + "s");

  const SearchResult hinge =
      exhaustive_search(ds.features, ds.labels, folds, 500.0, LossKind::kHinge, cfg);
  c.expect(hinge.completed, "hinge-loss search covered all 2^20 masks");
  c.expect(hinge.wall_seconds <= 900.0, "hinge-loss search within 15 minutes, took " +
                                            format_double(hinge.wall_seconds) + "s");
  c.note("squared " + format_double(squared.wall_seconds) + "s, hinge " +
         format_double(hinge.wall_seconds) + "s");
}

// ---------------------------------------------------------------------------------
// 6. Metric implementations against quadratic oracles.
void criterion_metrics(Check& c) {
  Xoshiro256pp rng(1234321);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.next_below(199);
    std::vector<double> scores(n), labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = std::floor(rng.next_unit() * 16.0) / 16.0;
      labels[i] = rng.next_unit() < 0.5 ? -1.0 : 1.0;
    }
    labels[0] = 1.0;
    labels[n - 1] = -1.0;
    const double fast = auc(scores, labels);
    const double slow = oracle::pairwise_auc(scores, labels);
    c.expect(std::abs(fast - slow) <= 1e-12, "sorted auc equals pairwise oracle (trial " +
                                                 std::to_string(trial) + ")");
  }

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 1 + rng.next_below(24);
    FeatureMask z_hat(p), z_star(p);
    for (std::size_t j = 0; j < p; ++j) {
      z_hat.set(j, rng.next_unit() < 0.4);
      z_star.set(j, rng.next_unit() < 0.5);
    }
    if (trial % 10 == 0) z_hat = FeatureMask::zeros(p);  // exercise the conventions
    if (trial % 17 == 0) z_star = FeatureMask::zeros(p);

    int hits = 0;
    for (std::size_t j = 0; j < p; ++j) hits += z_hat.test(j) && z_star.test(j) ? 1 : 0;
    const int selected = z_hat.cardinality();
    const int truth = z_star.cardinality();
    const double precision = selected > 0 ? double(hits) / selected : 0.0;
    const double recall = truth > 0 ? double(hits) / truth : 0.0;
    const double f1 =
        precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;

    const FeatureRecovery r = feature_recovery(z_hat, z_star);
    c.expect(r.precision == precision && r.recall == recall && r.f1 == f1 &&
                 r.nonzeros == selected,
             "recovery counts match the set oracle (trial " + std::to_string(trial) + ")");
  }
  c.note("100 auc instances (with ties) and 100 mask pairs (with empty cases)");
}

// ---------------------------------------------------------------------------------
// 7. Byte-level determinism of the experiment harness.
void criterion_determinism(Check& c, const fs::path& workdir) {
  ExperimentConfig cfg;
  cfg.p = 10;
  cfg.n_train = 60;
  cfg.n_total = 260;
  cfg.snr_list = {1.0};
  cfg.seeds = {1, 2};
  cfg.k_folds = 5;
  cfg.gamma_grid = {100.0, 1000.0};
  cfg.c_grid = {0.1, 10.0};
  cfg.methods = {kMethodCvSvm, kMethodCvLsSvm, kMethodL1Svm, kMethodSvmRfe};
  cfg.budget_seconds = 600.0;
  cfg.record_trace = true;

  const fs::path a = workdir / "det_a";
  const fs::path b = workdir / "det_b";
  const fs::path d8 = workdir / "det_8";
  for (const auto& dir : {a, b, d8}) fs::remove_all(dir);

  cfg.threads = 1;
  cfg.output_dir = a.string();
  run_experiment(cfg);
  cfg.output_dir = b.string();
  run_experiment(cfg);
  cfg.threads = 8;
  cfg.output_dir = d8.string();
  run_experiment(cfg);

  for (const char* name : {"auc.csv", "f1.csv", "nonzeros.csv"}) {
    c.expect(slurp(a / name) == slurp(b / name),
             std::string(name) + " identical across repeated runs");
    c.expect(slurp(a / name) == slurp(d8 / name),
             std::string(name) + " identical across worker counts 1 and 8");
  }

  // Models are part of the deterministic surface.
  for (const auto& entry : fs::directory_iterator(a / "models")) {
    const auto name = entry.path().filename();
    c.expect(slurp(entry.path()) == slurp(b / "models" / name),
             "model " + name.string() + " identical across runs");
    c.expect(slurp(entry.path()) == slurp(d8 / "models" / name),
             "model " + name.string() + " identical across worker counts");
  }

  // runtime.csv carries physical seconds; only its structure is checked.
  auto structure = [](const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find(',');
      const auto second = line.find(',', first + 1);
      out += line.substr(0, second);
      out += '\n';
    }
    return out;
  };
  c.expect(structure(slurp(a / "runtime.csv")) == structure(slurp(d8 / "runtime.csv")),
           "runtime.csv rows and ordering identical (values are wall-clock)");

  // Trace files: identical incumbent objectives and masks; timestamps are wall-clock.
  auto strip_time = [](const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      out += line.substr(line.find(',') + 1);
      out += '\n';
    }
    return out;
  };
  std::size_t traces = 0;
  for (const auto& entry : fs::directory_iterator(a / "traces")) {
    const auto name = entry.path().filename();
    c.expect(strip_time(slurp(entry.path())) == strip_time(slurp(b / "traces" / name)),
             "trace " + name.string() + " identical across runs (sans time column)");
    c.expect(strip_time(slurp(entry.path())) == strip_time(slurp(d8 / "traces" / name)),
             "trace " + name.string() + " identical across worker counts (sans time column)");

    // Monotone incumbent objectives.
    std::istringstream in(slurp(entry.path()));
    std::string line;
    std::getline(in, line);  // header
    double prev = std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const double obj = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
      c.expect(obj <= prev, "trace objectives non-increasing in " + name.string());
      prev = obj;
    }
    ++traces;
  }
  c.expect(traces > 0, "trace files were produced");
  c.note("2 repeated single-thread runs and one 8-thread run compared; " +
         std::to_string(traces) + " traces checked");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const fs::path workdir = fs::temp_directory_path() / "cvsvm_acceptance";
  fs::create_directories(workdir);

  struct Criterion {
    int number;
    const char* name;
    std::function<void(Check&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "search exactness vs brute-force oracle", criterion_oracle_equivalence},
      {2, "stationarity of the closed-form trainer", criterion_stationarity},
      {3, "strict optimality under feasible perturbations", criterion_uniqueness},
      {4, "desk-scale benchmark trends",
       [&](Check& c) { criterion_trends(c, workdir); }},
      {5, "full-scale enumeration runtime", criterion_performance},
      {6, "metric oracles (auc, recovery)", criterion_metrics},
      {7, "experiment determinism across runs and workers",
       [&](Check& c) { criterion_determinism(c, workdir); }},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    if (!only.empty() && !only.count(crit.number)) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.fn(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << "  exception: " << e.what() << "\n";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << crit.number << ": "
              << crit.name << " (" << format_double(secs) << "s)\n"
              << check.detail.str();
    std::cout.flush();
    if (!check.ok) ++failures;
  }
  if (failures == 0)
    std::cout << "all criteria passed\n";
  else
    std::cout << failures << " criteria FAILED\n";
  return failures;
}

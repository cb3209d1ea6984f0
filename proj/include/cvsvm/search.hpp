#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cvsvm/cv_objective.hpp"

namespace cvsvm {

enum class SearchMode { kExhaustive, kLocalSearch };

struct SearchConfig {
  SearchMode mode = SearchMode::kExhaustive;
  double wall_clock_budget_s = 300.0;
  int worker_count = 0;  // <= 0 selects hardware concurrency
  std::optional<std::pair<int, int>> cardinality_bounds;
  bool record_trace = true;
  std::uint64_t rng_seed = 0;                // local-search restart randomness
  std::optional<FeatureMask> initial_mask;   // local-search first restart
  int local_restarts = 20;                   // used when mode is kLocalSearch
};

struct TracePoint {
  double elapsed_s = 0.0;
  double objective = 0.0;
  FeatureMask mask;
};

struct SearchResult {
  FeatureMask best_mask;
  double best_objective = 0.0;
  CvEvaluation best_evaluation;  // re-scored from scratch at best_mask
  std::uint64_t masks_evaluated = 0;
  std::vector<TracePoint> incumbent_trace;  // objectives non-increasing
  bool completed = false;                   // search space fully covered within budget
  double wall_seconds = 0.0;
  bool used_fallback_refactorization = false;
};

// Candidate ordering used everywhere a winner is picked: primary objective, then fewer
// selected features, then lexicographically smallest bits.
bool candidate_less(double obj_a, const FeatureMask& a, double obj_b, const FeatureMask& b);

// Visits all 2^p masks in binary-reflected Gray-code order (consecutive masks differ in
// one feature) with incremental refactorization per step. The sequence is cut into
// fixed-size blocks that depend only on p; each block re-seeds its factorizations from
// scratch and blocks are reduced in index order, so the result (and every trace entry
// except its timestamp) is identical for any worker count. p is capped at 30.
SearchResult exhaustive_search(const Matrix& x, std::span<const double> y,
                               const FoldPartition& folds, double gamma, LossKind kind,
                               const SearchConfig& config);

// Steepest-descent over the 1-flip plus 1-swap neighborhood until no improving move,
// restarted from random masks. Heuristic companion for p beyond enumeration reach.
SearchResult local_search(const Matrix& x, std::span<const double> y,
                          const FoldPartition& folds, double gamma, LossKind kind,
                          const SearchConfig& config, int restarts);

// One training split plus its fold partition; the unit the gamma grid sweeps over.
struct CvInstance {
  Matrix x;
  std::vector<double> y;
  FoldPartition folds;
};

struct GammaSelection {
  std::vector<double> grid;
  std::vector<double> per_gamma_mean_objective;  // mean of best objectives over instances
  double chosen_gamma = 0.0;
  std::size_t chosen_index = 0;
  std::vector<std::vector<SearchResult>> results;  // [grid index][instance]
};

// Runs the configured search for every (gamma, instance) pair and picks the gamma whose
// mean best objective across instances is smallest; ties go to the smaller gamma.
// Per-instance results are retained for downstream reporting.
GammaSelection select_gamma(std::span<const CvInstance> instances,
                            std::span<const double> grid, LossKind kind,
                            const SearchConfig& config);

}  // namespace cvsvm

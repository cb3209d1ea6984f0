#include "cvsvm/search.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "cvsvm/kernels.hpp"
#include "cvsvm/rng.hpp"

namespace cvsvm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Per-fold training cross-products plus the gathered validation block.
struct FoldContext {
  TrainCache cache;
  Matrix val_x;
  std::vector<double> val_y;
};

std::vector<FoldContext> build_fold_contexts(const Matrix& x, std::span<const double> y,
                                             const FoldPartition& folds) {
  std::vector<FoldContext> ctx;
  ctx.reserve(static_cast<std::size_t>(folds.k_folds));
  for (int k = 0; k < folds.k_folds; ++k) {
    FoldContext fc;
    const auto train_idx = folds.training_indices(k);
    const auto val_idx = folds.validation_indices(k);
    if (train_idx.empty())
      throw invalid_parameter_error("search: a fold has an empty training set (K too small)");
    const Matrix train_x = gather_rows(x, train_idx);
    std::vector<double> train_y(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i)
      train_y[i] = y[static_cast<std::size_t>(train_idx[i])];
    fc.cache = TrainCache::build(train_x, train_y);
    fc.val_x = gather_rows(x, val_idx);
    fc.val_y.resize(val_idx.size());
    for (std::size_t i = 0; i < val_idx.size(); ++i)
      fc.val_y[i] = y[static_cast<std::size_t>(val_idx[i])];
    ctx.push_back(std::move(fc));
  }
  return ctx;
}

// One factorization per fold, walked in lockstep.
struct FoldSolvers {
  std::vector<SubsetFactorization> factors;
  std::vector<double> w;  // dense weight buffer shared across folds

  FoldSolvers(const std::vector<FoldContext>& ctx, double gamma, std::size_t p) : w(p, 0.0) {
    factors.reserve(ctx.size());
    for (const auto& fc : ctx) factors.emplace_back(fc.cache, gamma);
  }

  void set_mask(const FeatureMask& mask) {
    for (auto& f : factors) f.set_mask(mask);
  }

  void toggle(int j) {
    for (auto& f : factors) f.toggle(j);
  }

  double objective(const std::vector<FoldContext>& ctx, LossKind kind) {
    const auto& ops = kernels::active_ops();
    double total = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      double b = 0.0;
      factors[k].solve(w, b);
      const Matrix& vx = ctx[k].val_x;
      total += kind == LossKind::kHinge
                   ? ops.hinge_objective(vx.data.data(), vx.rows, vx.cols, vx.cols,
                                         ctx[k].val_y.data(), w.data(), b)
                   : ops.squared_objective(vx.data.data(), vx.rows, vx.cols, vx.cols,
                                           ctx[k].val_y.data(), w.data(), b);
    }
    return total;
  }

  bool used_fallback() const {
    for (const auto& f : factors)
      if (f.used_fallback()) return true;
    return false;
  }
};

FeatureMask mask_from_code(std::uint32_t code, std::size_t p) {
  FeatureMask m(p);
  for (std::size_t j = 0; j < p; ++j) m.bits[j] = (code >> j) & 1u;
  return m;
}

// Lex-smaller bits (z_0 first) for code-packed masks: the lowest differing bit decides.
bool code_lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const int j = std::countr_zero(a ^ b);
  return ((a >> j) & 1u) == 0u;
}

struct BlockBest {
  double objective = std::numeric_limits<double>::infinity();
  std::uint32_t code = 0;
  int cardinality = 0;
  std::uint64_t evaluated = 0;
  double finish_elapsed_s = 0.0;
  bool processed = false;
  bool fallback = false;

  void offer(double obj, std::uint32_t mask_code, int card) {
    if (obj < objective ||
        (obj == objective &&
         (card < cardinality || (card == cardinality && code_lex_less(mask_code, code))))) {
      objective = obj;
      code = mask_code;
      cardinality = card;
    }
  }
};

void validate_common(const Matrix& x, std::span<const double> y, const FoldPartition& folds,
                     double gamma, const SearchConfig& config) {
  if (x.rows == 0 || x.cols == 0) throw invalid_parameter_error("search: empty data");
  if (y.size() != x.rows) throw invalid_parameter_error("search: labels/features mismatch");
  if (folds.n() != x.rows) throw invalid_parameter_error("search: fold partition size != n");
  if (!(gamma > 0.0)) throw invalid_parameter_error("search: gamma must be > 0");
  if (!(config.wall_clock_budget_s > 0.0))
    throw invalid_parameter_error("search: budget must be > 0");
  if (config.cardinality_bounds) {
    const auto [lo, hi] = *config.cardinality_bounds;
    if (lo < 0 || lo > hi || static_cast<std::size_t>(hi) > x.cols)
      throw invalid_parameter_error("search: invalid cardinality bounds");
  }
}

}  // namespace

bool candidate_less(double obj_a, const FeatureMask& a, double obj_b, const FeatureMask& b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  const int ca = a.cardinality();
  const int cb = b.cardinality();
  if (ca != cb) return ca < cb;
  return mask_lex_less(a, b);
}

SearchResult exhaustive_search(const Matrix& x, std::span<const double> y,
                               const FoldPartition& folds, double gamma, LossKind kind,
                               const SearchConfig& config) {
  validate_common(x, y, folds, gamma, config);
  const std::size_t p = x.cols;
  if (p > 30)
    throw invalid_parameter_error(
        "exhaustive search is capped at p = 30 (2^p candidates); use local search");

  const auto start = Clock::now();
  const auto ctx = build_fold_contexts(x, y, folds);

  const std::uint64_t n_masks = std::uint64_t{1} << p;
  // Block size depends only on p so results are worker-count invariant.
  std::uint64_t block_size = n_masks / 64;
  block_size = std::max<std::uint64_t>(16, std::min<std::uint64_t>(4096, block_size));
  const std::uint64_t n_blocks = (n_masks + block_size - 1) / block_size;

  int lo = 0, hi = static_cast<int>(p);
  if (config.cardinality_bounds) {
    lo = config.cardinality_bounds->first;
    hi = config.cardinality_bounds->second;
  }

  std::vector<BlockBest> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<std::uint64_t> next_block{0};
  std::exception_ptr worker_error;
  std::mutex worker_error_mutex;

  auto run_blocks = [&]() {
    FoldSolvers solvers(ctx, gamma, p);
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      // Block 0 always runs so a best-so-far exists even under a tiny budget.
      if (b != 0 && seconds_since(start) > config.wall_clock_budget_s) return;

      BlockBest& best = blocks[static_cast<std::size_t>(b)];
      const std::uint64_t first = b * block_size;
      const std::uint64_t last = std::min(first + block_size, n_masks);

      std::uint32_t code = static_cast<std::uint32_t>(first ^ (first >> 1));
      solvers.set_mask(mask_from_code(code, p));
      for (std::uint64_t i = first;; ++i) {
        const int card = std::popcount(code);
        if (card >= lo && card <= hi) {
          best.offer(solvers.objective(ctx, kind), code, card);
          best.evaluated++;
        }
        if (i + 1 >= last) break;
        const int flip = std::countr_zero(i + 1);
        code ^= std::uint32_t{1} << flip;
        solvers.toggle(flip);
      }
      best.fallback = solvers.used_fallback();
      best.finish_elapsed_s = seconds_since(start);
      best.processed = true;
    }
  };

  // Exceptions must not escape a thread; the first one is kept and rethrown after join.
  auto worker = [&]() noexcept {
    try {
      run_blocks();
    } catch (...) {
      const std::scoped_lock lock(worker_error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  const int workers =
      static_cast<int>(std::min<std::uint64_t>(n_blocks, resolve_workers(config.worker_count)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  // Deterministic reduction and trace replay in block-index order. Trace timestamps use
  // the running max of block finish times so they are non-decreasing.
  SearchResult result;
  result.completed = true;
  double incumbent = std::numeric_limits<double>::infinity();
  std::uint32_t incumbent_code = 0;
  int incumbent_card = 0;
  bool have_incumbent = false;
  double clock_high_water = 0.0;
  for (const auto& blk : blocks) {
    if (!blk.processed) {
      result.completed = false;
      continue;
    }
    result.masks_evaluated += blk.evaluated;
    result.used_fallback_refactorization |= blk.fallback;
    clock_high_water = std::max(clock_high_water, blk.finish_elapsed_s);
    if (blk.evaluated == 0) continue;
    const bool improves =
        !have_incumbent || blk.objective < incumbent ||
        (blk.objective == incumbent &&
         (blk.cardinality < incumbent_card ||
          (blk.cardinality == incumbent_card && code_lex_less(blk.code, incumbent_code))));
    if (improves) {
      incumbent = blk.objective;
      incumbent_code = blk.code;
      incumbent_card = blk.cardinality;
      have_incumbent = true;
      if (config.record_trace)
        result.incumbent_trace.push_back(
            {clock_high_water, incumbent, mask_from_code(incumbent_code, p)});
    }
  }
  if (!have_incumbent)
    throw invalid_parameter_error(
        "search: budget exhausted before any in-bounds candidate was evaluated");

  result.best_mask = mask_from_code(incumbent_code, p);
  result.best_objective = incumbent;
  result.best_evaluation = cv_objective(x, y, folds, result.best_mask, gamma, kind);
  result.wall_seconds = seconds_since(start);
  return result;
}

SearchResult local_search(const Matrix& x, std::span<const double> y,
                          const FoldPartition& folds, double gamma, LossKind kind,
                          const SearchConfig& config, int restarts) {
  validate_common(x, y, folds, gamma, config);
  if (restarts < 1) throw invalid_parameter_error("local_search: restarts must be >= 1");
  const std::size_t p = x.cols;

  const auto start = Clock::now();
  const auto ctx = build_fold_contexts(x, y, folds);

  int lo = 0, hi = static_cast<int>(p);
  if (config.cardinality_bounds) {
    lo = config.cardinality_bounds->first;
    hi = config.cardinality_bounds->second;
  }

  Xoshiro256pp rng(config.rng_seed);
  auto random_mask = [&]() {
    FeatureMask m(p);
    const int card = lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    std::vector<int> idx(p);
    for (std::size_t j = 0; j < p; ++j) idx[j] = static_cast<int>(j);
    for (int c = 0; c < card; ++c) {
      const std::size_t pick =
          static_cast<std::size_t>(c) + static_cast<std::size_t>(rng.next_below(p - static_cast<std::size_t>(c)));
      std::swap(idx[static_cast<std::size_t>(c)], idx[pick]);
      m.set(static_cast<std::size_t>(idx[static_cast<std::size_t>(c)]), true);
    }
    return m;
  };

  FoldSolvers solvers(ctx, gamma, p);
  SearchResult result;
  result.completed = true;
  double best_obj = std::numeric_limits<double>::infinity();
  FeatureMask best_mask;
  bool have_best = false;

  for (int r = 0; r < restarts; ++r) {
    if (seconds_since(start) > config.wall_clock_budget_s) {
      result.completed = false;
      break;
    }
    FeatureMask current = (r == 0 && config.initial_mask) ? *config.initial_mask : random_mask();
    if (current.size() != p) throw invalid_parameter_error("local_search: bad initial mask");
    if (current.cardinality() < lo || current.cardinality() > hi)
      throw invalid_parameter_error("local_search: initial mask violates cardinality bounds");

    solvers.set_mask(current);
    double current_obj = solvers.objective(ctx, kind);
    result.masks_evaluated++;

    // Steepest descent: scan flips and add/drop swaps, take the best strictly improving
    // move under the candidate order.
    for (;;) {
      if (seconds_since(start) > config.wall_clock_budget_s) {
        result.completed = false;
        break;
      }
      double move_obj = current_obj;
      FeatureMask move_mask = current;
      bool found = false;

      auto consider = [&](const FeatureMask& cand, double obj) {
        if (candidate_less(obj, cand, move_obj, move_mask)) {
          move_obj = obj;
          move_mask = cand;
          found = true;
        }
      };

      for (std::size_t j = 0; j < p; ++j) {
        const bool selected = current.test(j);
        const int new_card = current.cardinality() + (selected ? -1 : 1);
        if (new_card < lo || new_card > hi) continue;
        solvers.toggle(static_cast<int>(j));
        FeatureMask cand = current;
        cand.set(j, !selected);
        consider(cand, solvers.objective(ctx, kind));
        result.masks_evaluated++;
        solvers.toggle(static_cast<int>(j));
      }
      for (std::size_t a = 0; a < p; ++a) {
        if (!current.test(a)) continue;
        for (std::size_t d = 0; d < p; ++d) {
          if (current.test(d)) continue;
          solvers.toggle(static_cast<int>(a));
          solvers.toggle(static_cast<int>(d));
          FeatureMask cand = current;
          cand.set(a, false);
          cand.set(d, true);
          consider(cand, solvers.objective(ctx, kind));
          result.masks_evaluated++;
          solvers.toggle(static_cast<int>(d));
          solvers.toggle(static_cast<int>(a));
        }
      }

      if (!found) break;
      const auto old_support = current.support();
      current = move_mask;
      current_obj = move_obj;
      // Re-sync the factorizations to the accepted move.
      for (int j : old_support)
        if (!current.test(static_cast<std::size_t>(j))) solvers.toggle(j);
      for (int j : current.support())
        if (std::find(old_support.begin(), old_support.end(), j) == old_support.end())
          solvers.toggle(j);
    }

    if (!have_best || candidate_less(current_obj, current, best_obj, best_mask)) {
      best_obj = current_obj;
      best_mask = current;
      have_best = true;
      if (config.record_trace)
        result.incumbent_trace.push_back({seconds_since(start), best_obj, best_mask});
    }
    if (!result.completed) break;
  }

  if (!have_best) throw invalid_parameter_error("local_search: budget too small to evaluate");
  result.best_mask = best_mask;
  result.best_objective = best_obj;
  result.best_evaluation = cv_objective(x, y, folds, best_mask, gamma, kind);
  result.used_fallback_refactorization = solvers.used_fallback();
  result.wall_seconds = seconds_since(start);
  return result;
}

GammaSelection select_gamma(std::span<const CvInstance> instances,
                            std::span<const double> grid, LossKind kind,
                            const SearchConfig& config) {
  if (instances.empty()) throw invalid_parameter_error("select_gamma: no instances");
  if (grid.empty()) throw invalid_parameter_error("select_gamma: empty gamma grid");

  GammaSelection sel;
  sel.grid.assign(grid.begin(), grid.end());
  sel.results.resize(grid.size());
  sel.per_gamma_mean_objective.resize(grid.size());

  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    sel.results[g].reserve(instances.size());
    for (const auto& inst : instances) {
      SearchResult res =
          config.mode == SearchMode::kExhaustive
              ? exhaustive_search(inst.x, inst.y, inst.folds, grid[g], kind, config)
              : local_search(inst.x, inst.y, inst.folds, grid[g], kind, config,
                             config.local_restarts);
      total += res.best_objective;
      sel.results[g].push_back(std::move(res));
    }
    sel.per_gamma_mean_objective[g] = total / static_cast<double>(instances.size());
  }

  sel.chosen_index = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double cur = sel.per_gamma_mean_objective[g];
    const double best = sel.per_gamma_mean_objective[sel.chosen_index];
    if (cur < best || (cur == best && grid[g] < grid[sel.chosen_index])) sel.chosen_index = g;
  }
  sel.chosen_gamma = grid[sel.chosen_index];
  return sel;
}

}  // namespace cvsvm

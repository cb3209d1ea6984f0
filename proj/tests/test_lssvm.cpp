#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvsvm/lssvm.hpp"
#include "cvsvm/rng.hpp"
#include "oracles.hpp"

using namespace cvsvm;

namespace {

// Random +-1 labels and N(0,1)-ish features.
struct Instance {
  Matrix x;
  std::vector<double> y;
};

Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t p) {
  NormalStream normals(seed);
  Instance inst;
  inst.x = Matrix(n, p);
  for (auto& v : inst.x.data) v = normals.next();
  inst.y.resize(n);
  for (auto& v : inst.y) v = normals.rng().next_unit() < 0.5 ? -1.0 : 1.0;
  return inst;
}

FeatureMask random_mask(Xoshiro256pp& rng, std::size_t p) {
  FeatureMask m(p);
  for (std::size_t j = 0; j < p; ++j) m.set(j, rng.next_unit() < 0.5);
  return m;
}

}  // namespace

TEST_CASE("empty support reduces to the label mean bias") {
  Matrix x(3, 2);
  x.at(0, 0) = 0.3; x.at(0, 1) = -1.0;
  x.at(1, 0) = 2.0; x.at(1, 1) = 0.5;
  x.at(2, 0) = -0.7; x.at(2, 1) = 0.1;
  const std::vector<double> y = {1.0, 1.0, -1.0};
  const FoldModel m = train_lssvm(x, y, FeatureMask::zeros(2), 10.0);
  CHECK(m.bias == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(m.weights[0] == 0.0);
  CHECK(m.weights[1] == 0.0);
}

TEST_CASE("two-point instance solved by hand") {
  // x = (1; -1), y = (+1; -1), full mask, gamma = 1: the 2x2 normal system gives
  // w = 2/3, b = 0.
  Matrix x(2, 1);
  x.at(0, 0) = 1.0;
  x.at(1, 0) = -1.0;
  const std::vector<double> y = {1.0, -1.0};
  const FoldModel m = train_lssvm(x, y, FeatureMask::ones(1), 1.0);
  CHECK(m.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.bias == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stationarity_residual(m, x, y, 1.0) <= 1e-12);
}

TEST_CASE("trained models satisfy the first-order conditions") {
  Xoshiro256pp rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(1000 + trial, 10 + rng.next_below(40), 1 + rng.next_below(8));
    const FeatureMask mask = random_mask(rng, inst.x.cols);
    const double gamma = std::pow(10.0, rng.next_unit() * 4.0 - 1.0);
    const FoldModel m = train_lssvm(inst.x, inst.y, mask, gamma);
    CHECK(stationarity_residual(m, inst.x, inst.y, gamma) <= 1e-8);
  }
}

TEST_CASE("bias perturbation shows up scaled by gamma and the sample count") {
  const auto inst = random_instance(5, 25, 3);
  const double gamma = 50.0;
  FoldModel m = train_lssvm(inst.x, inst.y, FeatureMask::zeros(3), gamma);
  m.bias += 0.1;
  const double expect = gamma * static_cast<double>(inst.x.rows) * 0.1;
  CHECK(stationarity_residual(m, inst.x, inst.y, gamma) >= expect * (1.0 - 1e-9));
  CHECK(stationarity_residual(m, inst.x, inst.y, gamma) <= expect * (1.0 + 1e-9));
}

TEST_CASE("linear-system route agrees with the gradient-descent route") {
  // Same minimizer through two different algorithms.
  const auto inst = random_instance(42, 30, 5);
  const FeatureMask mask = FeatureMask::ones(5);
  const double gamma = 100.0;
  const FoldModel m = train_lssvm(inst.x, inst.y, mask, gamma);
  const auto [w_gd, b_gd] = oracle::gradient_descent_fold(inst.x, inst.y, mask, gamma);

  const double f_sys = lssvm_objective(inst.x, inst.y, m.weights, m.bias, gamma);
  const double f_gd = lssvm_objective(inst.x, inst.y, w_gd, b_gd, gamma);
  CHECK(std::abs(f_sys - f_gd) <= 1e-6 * std::max(1.0, std::abs(f_gd)));
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(m.weights[j] == doctest::Approx(w_gd[j]).epsilon(1e-6));
  CHECK(m.bias == doctest::Approx(b_gd).epsilon(1e-6));

  SUBCASE("also on restricted random supports") {
    Xoshiro256pp rng(9);
    for (int trial = 0; trial < 5; ++trial) {
      const auto inst2 = random_instance(300 + trial, 20, 4);
      const FeatureMask mask2 = random_mask(rng, 4);
      const double g2 = 10.0 + rng.next_unit() * 500.0;
      const FoldModel m2 = train_lssvm(inst2.x, inst2.y, mask2, g2);
      const auto [w2, b2] = oracle::gradient_descent_fold(inst2.x, inst2.y, mask2, g2);
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(m2.weights[j] == doctest::Approx(w2[j]).epsilon(1e-5));
      CHECK(m2.bias == doctest::Approx(b2).epsilon(1e-5));
    }
  }
}

TEST_CASE("off-support weights are exactly zero") {
  Xoshiro256pp rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(trial, 15, 6);
    const FeatureMask mask = random_mask(rng, 6);
    const FoldModel m = train_lssvm(inst.x, inst.y, mask, 100.0);
    for (std::size_t j = 0; j < 6; ++j) {
      if (!mask.test(j)) CHECK(m.weights[j] == 0.0);
    }
  }
}

TEST_CASE("training is invariant to sample order") {
  const auto inst = random_instance(77, 20, 4);
  const FoldModel a = train_lssvm(inst.x, inst.y, FeatureMask::ones(4), 200.0);

  std::vector<int> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  Xoshiro256pp rng(4);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.next_below(i)]);
  const Matrix px = gather_rows(inst.x, perm);
  std::vector<double> py(20);
  for (std::size_t i = 0; i < 20; ++i) py[i] = inst.y[static_cast<std::size_t>(perm[i])];
  const FoldModel b = train_lssvm(px, py, FeatureMask::ones(4), 200.0);

  for (std::size_t j = 0; j < 4; ++j)
    CHECK(a.weights[j] == doctest::Approx(b.weights[j]).epsilon(1e-12));
  CHECK(a.bias == doctest::Approx(b.bias).epsilon(1e-12));
}

TEST_CASE("objective is strictly convex around the trained point") {
  Xoshiro256pp rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(500 + trial, 20, 5);
    const FeatureMask mask = random_mask(rng, 5);
    const double gamma = 100.0;
    const FoldModel m = train_lssvm(inst.x, inst.y, mask, gamma);
    const double f_star = lssvm_objective(inst.x, inst.y, m.weights, m.bias, gamma);

    const auto support = mask.support();
    for (int k = 0; k < 20; ++k) {
      std::vector<double> dir(support.size() + 1);
      double norm = 0.0;
      for (auto& d : dir) {
        d = rng.next_unit() - 0.5;
        norm += d * d;
      }
      norm = std::sqrt(norm);
      auto w = m.weights;
      for (std::size_t u = 0; u < support.size(); ++u)
        w[static_cast<std::size_t>(support[u])] += 1e-3 * dir[u] / norm;
      const double b = m.bias + 1e-3 * dir.back() / norm;
      CHECK(lssvm_objective(inst.x, inst.y, w, b, gamma) > f_star);
    }
  }
}

TEST_CASE("curvature is positive in every feasible unit direction") {
  Xoshiro256pp rng(37);
  const auto inst = random_instance(7, 12, 4);
  const FeatureMask mask = FeatureMask::from_string("1011");
  const auto support = mask.support();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u(support.size());
    double t = rng.next_unit() - 0.5;
    double norm = t * t;
    for (auto& v : u) {
      v = rng.next_unit() - 0.5;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    t /= norm;
    for (auto& v : u) v /= norm;

    double quad = 0.0;
    for (double v : u) quad += v * v;
    const double gamma = 100.0;
    for (std::size_t i = 0; i < inst.x.rows; ++i) {
      double proj = t;
      for (std::size_t k = 0; k < support.size(); ++k)
        proj += u[k] * inst.x.at(i, static_cast<std::size_t>(support[k]));
      quad += gamma * proj * proj;
    }
    CHECK(quad > 0.0);
  }
}

TEST_CASE("degenerate all-same-label training works without special cases") {
  Matrix x(4, 2);
  NormalStream normals(12);
  for (auto& v : x.data) v = normals.next();
  const std::vector<double> y = {1.0, 1.0, 1.0, 1.0};
  const FoldModel m = train_lssvm(x, y, FeatureMask::ones(2), 500.0);
  CHECK(stationarity_residual(m, x, y, 500.0) <= 1e-8);
}

TEST_CASE("parameter validation") {
  Matrix x(2, 1);
  x.at(0, 0) = 1.0;
  x.at(1, 0) = -1.0;
  const std::vector<double> y = {1.0, -1.0};
  CHECK_THROWS_AS(train_lssvm(x, y, FeatureMask::ones(1), 0.0), invalid_parameter_error);
  CHECK_THROWS_AS(train_lssvm(x, y, FeatureMask::ones(1), -2.0), invalid_parameter_error);
  const std::vector<double> bad_y = {1.0, 0.5};
  CHECK_THROWS_AS(train_lssvm(x, bad_y, FeatureMask::ones(1), 1.0), invalid_parameter_error);
  Matrix bad_x = x;
  bad_x.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(train_lssvm(bad_x, y, FeatureMask::ones(1), 1.0), numeric_error);
}

TEST_CASE("incremental factorization matches from-scratch training") {
  const auto inst = random_instance(2718, 24, 6);
  const TrainCache cache = TrainCache::build(inst.x, inst.y);
  const double gamma = 300.0;

  SUBCASE("single insertion equals the singleton solve") {
    for (int j = 0; j < 6; ++j) {
      SubsetFactorization fact(cache, gamma);
      fact.add_feature(j);
      std::vector<double> w(6);
      double b = 0.0;
      fact.solve(w, b);
      FeatureMask mask(6);
      mask.set(static_cast<std::size_t>(j), true);
      const FoldModel ref = train_lssvm(inst.x, inst.y, mask, gamma);
      for (std::size_t c = 0; c < 6; ++c)
        CHECK(w[c] == doctest::Approx(ref.weights[c]).epsilon(1e-9));
      CHECK(b == doctest::Approx(ref.bias).epsilon(1e-9));
    }
  }

  SUBCASE("insert then remove returns to the original solution") {
    SubsetFactorization fact(cache, gamma);
    fact.add_feature(2);
    fact.add_feature(4);
    std::vector<double> w_before(6), w_after(6);
    double b_before = 0.0, b_after = 0.0;
    fact.solve(w_before, b_before);
    fact.add_feature(1);
    fact.remove_feature(1);
    fact.solve(w_after, b_after);
    for (std::size_t c = 0; c < 6; ++c)
      CHECK(w_after[c] == doctest::Approx(w_before[c]).epsilon(1e-9));
    CHECK(b_after == doctest::Approx(b_before).epsilon(1e-9));
  }

  SUBCASE("a full Gray-code walk stays within 1e-8 of from-scratch solves") {
    SubsetFactorization fact(cache, gamma);
    std::vector<double> w(6);
    double b = 0.0;
    std::uint32_t code = 0;
    for (std::uint32_t i = 0;; ++i) {
      fact.solve(w, b);
      FeatureMask mask(6);
      for (std::size_t j = 0; j < 6; ++j) mask.bits[j] = (code >> j) & 1u;
      const FoldModel ref = train_lssvm(inst.x, inst.y, mask, gamma);
      for (std::size_t c = 0; c < 6; ++c)
        CHECK(w[c] == doctest::Approx(ref.weights[c]).epsilon(1e-8));
      CHECK(b == doctest::Approx(ref.bias).epsilon(1e-8));
      CHECK(fact.factor_residual() <= 1e-10);

      if (i + 1 >= 64) break;
      const int flip = std::countr_zero(i + 1);
      code ^= std::uint32_t{1} << flip;
      fact.toggle(flip);
    }
    CHECK_FALSE(fact.used_fallback());
  }

  SUBCASE("update_subset toggles membership") {
    SubsetFactorization fact(cache, gamma);
    update_subset(fact, 3);
    CHECK(fact.has(3));
    update_subset(fact, 3);
    CHECK_FALSE(fact.has(3));
  }

  SUBCASE("misuse rejected") {
    SubsetFactorization fact(cache, gamma);
    fact.add_feature(0);
    CHECK_THROWS_AS(fact.add_feature(0), invalid_parameter_error);
    CHECK_THROWS_AS(fact.remove_feature(5), invalid_parameter_error);
  }
}

TEST_CASE("factorization solves match the reference path on random subsets") {
  // Cache-backed solves against plain training; 50 random (mask, instance) pairs.
  Xoshiro256pp rng(451);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(9000 + trial, 18, 7);
    const TrainCache cache = TrainCache::build(inst.x, inst.y);
    const double gamma = std::pow(10.0, rng.next_unit() * 3.0);
    const FeatureMask mask = random_mask(rng, 7);
    SubsetFactorization fact(cache, gamma);
    fact.set_mask(mask);
    std::vector<double> w(7);
    double b = 0.0;
    fact.solve(w, b);
    const FoldModel ref = train_lssvm(inst.x, inst.y, mask, gamma);
    for (std::size_t c = 0; c < 7; ++c)
      CHECK(w[c] == doctest::Approx(ref.weights[c]).epsilon(1e-8));
    CHECK(b == doctest::Approx(ref.bias).epsilon(1e-8));
  }
}

#include "cvsvm/datagen.hpp"

#include <cmath>
#include <numeric>

#include "cvsvm/kernels.hpp"
#include "cvsvm/rng.hpp"

namespace cvsvm {

std::vector<int> FoldPartition::validation_indices(int fold) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < fold_of_sample.size(); ++i)
    if (fold_of_sample[i] == fold) idx.push_back(static_cast<int>(i));
  return idx;
}

std::vector<int> FoldPartition::training_indices(int fold) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < fold_of_sample.size(); ++i)
    if (fold_of_sample[i] != fold) idx.push_back(static_cast<int>(i));
  return idx;
}

std::vector<int> FoldPartition::fold_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k_folds), 0);
  for (int f : fold_of_sample) sizes[static_cast<std::size_t>(f)]++;
  return sizes;
}

std::vector<double> make_true_coefficients(int p) {
  if (p < 1) throw invalid_parameter_error("make_true_coefficients: p must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(p), 0.0);
  for (int j = 0; j < p; j += 2) w[static_cast<std::size_t>(j)] = 1.0;
  return w;
}

Matrix make_covariance(const CovarianceSpec& spec) {
  if (spec.p < 1) throw invalid_parameter_error("make_covariance: p must be >= 1");
  if (!(std::abs(spec.rho) < 1.0))
    throw invalid_parameter_error("make_covariance: |rho| must be < 1");
  const std::size_t p = static_cast<std::size_t>(spec.p);
  Matrix sigma(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    sigma.at(j, j) = 1.0;
    double v = 1.0;
    for (std::size_t d = 1; j + d < p; ++d) {
      v *= spec.rho;
      sigma.at(j, j + d) = v;
      sigma.at(j + d, j) = v;
    }
  }
  return sigma;
}

// Generation deliberately sticks to the scalar reference kernels: emitted datasets must
// not depend on which SIMD backend the host CPU dispatches.
double noise_variance(std::span<const double> w_star, const Matrix& sigma, double snr) {
  if (!(snr > 0.0)) throw invalid_parameter_error("noise_variance: snr must be > 0");
  if (w_star.size() != sigma.rows || sigma.rows != sigma.cols)
    throw invalid_parameter_error("noise_variance: dimension mismatch");
  std::vector<double> sw(w_star.size(), 0.0);
  kernels::scalar_ops().matvec(sigma.data.data(), sigma.rows, sigma.cols, sigma.cols,
                               w_star.data(), sw.data());
  const double quad = kernels::scalar_ops().dot(w_star.data(), sw.data(), w_star.size());
  return quad / snr;
}

Dataset generate_dataset(int p, int n_total, double snr, std::uint64_t seed) {
  if (p < 1) throw invalid_parameter_error("generate_dataset: p must be >= 1");
  if (n_total < 1) throw invalid_parameter_error("generate_dataset: n_total must be >= 1");
  if (!(snr > 0.0)) throw invalid_parameter_error("generate_dataset: snr must be > 0");

  const auto w_star = make_true_coefficients(p);
  const Matrix sigma = make_covariance({p, 0.35});
  const Matrix chol = cholesky_lower(sigma);
  const double noise_sd = std::sqrt(noise_variance(w_star, sigma, snr));

  Dataset ds;
  ds.seed = seed;
  ds.snr = snr;
  ds.true_coefficients = w_star;
  ds.features = Matrix(static_cast<std::size_t>(n_total), static_cast<std::size_t>(p));
  ds.labels.resize(static_cast<std::size_t>(n_total));

  // Per sample: p normals for the feature vector, then one for the label noise.
  NormalStream normals(seed);
  std::vector<double> g(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (auto& v : g) v = normals.next();
    double* x = ds.features.row(i);
    for (std::size_t j = 0; j < ds.p(); ++j)
      x[j] = kernels::scalar_ops().dot(chol.row(j), g.data(), j + 1);
    const double t = kernels::scalar_ops().dot(w_star.data(), x, ds.p()) +
                     noise_sd * normals.next();
    ds.labels[i] = t >= 0.0 ? 1.0 : -1.0;
  }
  return ds;
}

FoldPartition partition_folds(int n, int k_folds, std::uint64_t seed) {
  if (n < 1) throw invalid_parameter_error("partition_folds: n must be >= 1");
  if (k_folds < 1 || k_folds > n)
    throw invalid_parameter_error("partition_folds: need 1 <= K <= n");

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Xoshiro256pp rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(perm[i - 1], perm[j]);
  }

  FoldPartition folds;
  folds.k_folds = k_folds;
  folds.fold_of_sample.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i)
    folds.fold_of_sample[static_cast<std::size_t>(perm[i])] =
        static_cast<int>(i % static_cast<std::size_t>(k_folds));
  return folds;
}

}  // namespace cvsvm

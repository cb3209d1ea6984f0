#include "cvsvm/lssvm.hpp"

#include <cmath>

namespace cvsvm {

namespace {

constexpr double kPivotGuard = 1e-12;
constexpr double kJitter = 1e-10;

void check_training_inputs(const Matrix& x, std::span<const double> y, double gamma) {
  if (!(gamma > 0.0)) throw invalid_parameter_error("gamma must be > 0");
  if (x.rows == 0) throw invalid_parameter_error("training set must be nonempty");
  if (y.size() != x.rows) throw invalid_parameter_error("labels/features row mismatch");
  if (!x.all_finite()) throw numeric_error("non-finite feature value");
  for (double v : y) {
    if (v != 1.0 && v != -1.0) throw invalid_parameter_error("labels must be exactly +-1");
  }
}

}  // namespace

TrainCache TrainCache::build(const Matrix& x, std::span<const double> y) {
  TrainCache c;
  c.p = static_cast<int>(x.cols);
  c.m = static_cast<int>(x.rows);
  c.gram.assign(x.cols * x.cols, 0.0);
  c.xsum.assign(x.cols, 0.0);
  c.xy.assign(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double xij = xi[j];
      double* gram_row = c.gram.data() + j * x.cols;
      for (std::size_t k = j; k < x.cols; ++k) gram_row[k] += xij * xi[k];
      c.xsum[j] += xij;
      c.xy[j] += y[i] * xij;
    }
    c.ysum += y[i];
  }
  for (std::size_t j = 0; j < x.cols; ++j)
    for (std::size_t k = 0; k < j; ++k) c.gram[j * x.cols + k] = c.gram[k * x.cols + j];
  return c;
}

FoldModel train_lssvm(const Matrix& x, std::span<const double> y, const FeatureMask& mask,
                      double gamma) {
  check_training_inputs(x, y, gamma);
  if (mask.size() != x.cols) throw invalid_parameter_error("mask length != feature count");

  const auto support = mask.support();
  const std::size_t s = support.size();
  const std::size_t dim = s + 1;
  const double m = static_cast<double>(x.rows);

  // Normal system assembled directly from the rows, bias first.
  Matrix sys(dim, dim);
  std::vector<double> rhs(dim, 0.0);
  sys.at(0, 0) = m;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = x.row(i);
    rhs[0] += y[i];
    for (std::size_t a = 0; a < s; ++a) {
      const double xa = xi[static_cast<std::size_t>(support[a])];
      sys.at(0, a + 1) += xa;
      rhs[a + 1] += y[i] * xa;
      for (std::size_t b = a; b < s; ++b)
        sys.at(a + 1, b + 1) += xa * xi[static_cast<std::size_t>(support[b])];
    }
  }
  for (std::size_t a = 0; a < s; ++a) {
    sys.at(a + 1, a + 1) += 1.0 / gamma;
    sys.at(a + 1, 0) = sys.at(0, a + 1);
    for (std::size_t b = a + 1; b < s; ++b) sys.at(b + 1, a + 1) = sys.at(a + 1, b + 1);
  }

  Matrix lower;
  try {
    lower = cholesky_lower(sys);
  } catch (const numeric_error&) {
    // One-time diagonal jitter; keeps degenerate systems solvable without changing
    // results at this problem's scale.
    for (std::size_t d = 0; d < dim; ++d) sys.at(d, d) += kJitter;
    lower = cholesky_lower(sys);
  }
  cholesky_solve(lower, rhs);

  FoldModel model;
  model.weights.assign(x.cols, 0.0);
  model.bias = rhs[0];
  for (std::size_t a = 0; a < s; ++a)
    model.weights[static_cast<std::size_t>(support[a])] = rhs[a + 1];
  model.mask = mask;
  model.gamma = gamma;
  return model;
}

double lssvm_objective(const Matrix& x, std::span<const double> y,
                       std::span<const double> w, double b, double gamma) {
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = x.row(i);
    double f = b;
    for (std::size_t j = 0; j < x.cols; ++j) f += w[j] * xi[j];
    const double e = 1.0 - y[i] * f;
    loss += e * e;
  }
  return 0.5 * reg + 0.5 * gamma * loss;
}

double stationarity_residual(const FoldModel& model, const Matrix& x,
                             std::span<const double> y, double gamma) {
  check_training_inputs(x, y, gamma);
  const std::size_t p = x.cols;
  std::vector<double> grad(p, 0.0);
  double residual_sum = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = x.row(i);
    double f = model.bias;
    for (std::size_t j = 0; j < p; ++j) f += model.weights[j] * xi[j];
    const double r = y[i] - f;
    residual_sum += r;
    for (std::size_t j = 0; j < p; ++j) grad[j] += r * xi[j];
  }
  double worst = std::abs(gamma * residual_sum);
  for (std::size_t j = 0; j < p; ++j) {
    if (!model.mask.test(j)) continue;
    worst = std::max(worst, std::abs(model.weights[j] - gamma * grad[j]));
  }
  return worst;
}

SubsetFactorization::SubsetFactorization(const TrainCache& cache, double gamma)
    : cache_(&cache), gamma_(gamma), dim_(1) {
  if (!(gamma > 0.0)) throw invalid_parameter_error("gamma must be > 0");
  const std::size_t full = static_cast<std::size_t>(cache.p) + 1;
  factor_.assign(full * full, 0.0);
  position_.assign(static_cast<std::size_t>(cache.p), -1);
  order_.reserve(full);
  scratch_.assign(full, 0.0);
  refactorize();
}

double SubsetFactorization::system_entry(int a, int b) const {
  if (a == 0 && b == 0) return static_cast<double>(cache_->m);
  if (a == 0) return cache_->xsum[static_cast<std::size_t>(order_[b - 1])];
  if (b == 0) return cache_->xsum[static_cast<std::size_t>(order_[a - 1])];
  const int fa = order_[a - 1];
  const int fb = order_[b - 1];
  double v = cache_->gram_at(fa, fb);
  if (fa == fb) v += 1.0 / gamma_;
  return v;
}

void SubsetFactorization::refactorize() {
  const std::size_t stride = static_cast<std::size_t>(cache_->p) + 1;
  const int n = dim_;
  bool jittered = false;
  for (;;) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double sum = system_entry(i, j);
        if (jittered && i == j) sum += kJitter;
        for (int k = 0; k < j; ++k)
          sum -= factor_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(k)] *
                 factor_[static_cast<std::size_t>(j) * stride + static_cast<std::size_t>(k)];
        if (i == j) {
          if (sum <= kPivotGuard) {
            ok = false;
            break;
          }
          factor_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(i)] =
              std::sqrt(sum);
        } else {
          factor_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)] =
              sum / factor_[static_cast<std::size_t>(j) * stride + static_cast<std::size_t>(j)];
        }
      }
    }
    if (ok) return;
    if (jittered) throw numeric_error("subset factorization failed even with jitter");
    jittered = true;
    used_jitter_ = true;
  }
}

void SubsetFactorization::set_mask(const FeatureMask& mask) {
  if (mask.size() != static_cast<std::size_t>(cache_->p))
    throw invalid_parameter_error("mask length != feature count");
  std::fill(position_.begin(), position_.end(), -1);
  order_.clear();
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (mask.test(j)) {
      position_[j] = static_cast<int>(order_.size());
      order_.push_back(static_cast<int>(j));
    }
  }
  dim_ = static_cast<int>(order_.size()) + 1;
  refactorize();
}

void SubsetFactorization::add_feature(int j) {
  if (has(j)) throw invalid_parameter_error("add_feature: feature already selected");
  const std::size_t stride = static_cast<std::size_t>(cache_->p) + 1;
  const int k = dim_;

  position_[static_cast<std::size_t>(j)] = static_cast<int>(order_.size());
  order_.push_back(j);
  dim_++;

  // New bottom row of L by forward substitution against the new column.
  double* row = factor_.data() + static_cast<std::size_t>(k) * stride;
  for (int i = 0; i < k; ++i) {
    double sum = system_entry(i, k);
    const double* li = factor_.data() + static_cast<std::size_t>(i) * stride;
    for (int t = 0; t < i; ++t) sum -= li[t] * row[t];
    row[i] = sum / li[i];
  }
  double diag = system_entry(k, k);
  for (int t = 0; t < k; ++t) diag -= row[t] * row[t];
  if (diag <= kPivotGuard) {
    used_fallback_ = true;
    refactorize();
    return;
  }
  row[k] = std::sqrt(diag);
}

void SubsetFactorization::remove_feature(int j) {
  if (!has(j)) throw invalid_parameter_error("remove_feature: feature not selected");
  const std::size_t stride = static_cast<std::size_t>(cache_->p) + 1;
  const int q = position_[static_cast<std::size_t>(j)] + 1;  // factor row of the feature
  const int tail = dim_ - q - 1;

  // Save the deleted column below its diagonal; it becomes the rank-1 update vector.
  std::vector<double> v(static_cast<std::size_t>(tail));
  for (int i = 0; i < tail; ++i)
    v[static_cast<std::size_t>(i)] =
        factor_[static_cast<std::size_t>(q + 1 + i) * stride + static_cast<std::size_t>(q)];

  // Shift the rows after q up, dropping column q.
  for (int r = q + 1; r < dim_; ++r) {
    double* dst = factor_.data() + static_cast<std::size_t>(r - 1) * stride;
    const double* src = factor_.data() + static_cast<std::size_t>(r) * stride;
    for (int c = 0; c < q; ++c) dst[c] = src[c];
    for (int c = q; c < r; ++c) dst[c] = src[c + 1];
  }

  // Restore triangularity of the trailing block with a positive rank-1 update:
  // L22' L22'^T = L22 L22^T + v v^T.
  for (int c = 0; c < tail; ++c) {
    double* diag = factor_.data() + static_cast<std::size_t>(q + c) * stride +
                   static_cast<std::size_t>(q + c);
    const double r = std::hypot(*diag, v[static_cast<std::size_t>(c)]);
    const double cosine = r / *diag;
    const double sine = v[static_cast<std::size_t>(c)] / *diag;
    *diag = r;
    for (int i = c + 1; i < tail; ++i) {
      double& lic = factor_[static_cast<std::size_t>(q + i) * stride +
                            static_cast<std::size_t>(q + c)];
      lic = (lic + sine * v[static_cast<std::size_t>(i)]) / cosine;
      v[static_cast<std::size_t>(i)] = cosine * v[static_cast<std::size_t>(i)] - sine * lic;
    }
  }

  order_.erase(order_.begin() + (q - 1));
  position_[static_cast<std::size_t>(j)] = -1;
  for (std::size_t i = static_cast<std::size_t>(q - 1); i < order_.size(); ++i)
    position_[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);
  dim_--;

  for (int c = 0; c < tail; ++c) {
    const double d = factor_[static_cast<std::size_t>(q + c) * stride +
                             static_cast<std::size_t>(q + c)];
    if (!std::isfinite(d) || d <= kPivotGuard) {
      used_fallback_ = true;
      refactorize();
      return;
    }
  }
}

void SubsetFactorization::toggle(int j) {
  if (has(j))
    remove_feature(j);
  else
    add_feature(j);
}

FeatureMask SubsetFactorization::mask() const {
  FeatureMask m(static_cast<std::size_t>(cache_->p));
  for (int j : order_) m.set(static_cast<std::size_t>(j), true);
  return m;
}

void SubsetFactorization::solve(std::span<double> w, double& b) const {
  const std::size_t stride = static_cast<std::size_t>(cache_->p) + 1;
  double* u = scratch_.data();
  u[0] = cache_->ysum;
  for (int i = 1; i < dim_; ++i) u[i] = cache_->xy[static_cast<std::size_t>(order_[i - 1])];

  for (int i = 0; i < dim_; ++i) {
    const double* li = factor_.data() + static_cast<std::size_t>(i) * stride;
    double sum = u[i];
    for (int k = 0; k < i; ++k) sum -= li[k] * u[k];
    u[i] = sum / li[i];
  }
  for (int i = dim_; i-- > 0;) {
    double sum = u[i];
    for (int k = i + 1; k < dim_; ++k)
      sum -= factor_[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(i)] * u[k];
    u[i] = sum / factor_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(i)];
  }

  std::fill(w.begin(), w.end(), 0.0);
  b = u[0];
  for (int i = 1; i < dim_; ++i) w[static_cast<std::size_t>(order_[i - 1])] = u[i];
}

double SubsetFactorization::factor_residual() const {
  const std::size_t stride = static_cast<std::size_t>(cache_->p) + 1;
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j <= i; ++j) {
      double prod = 0.0;
      for (int k = 0; k <= j; ++k)
        prod += factor_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(k)] *
                factor_[static_cast<std::size_t>(j) * stride + static_cast<std::size_t>(k)];
      const double ref = system_entry(i, j);
      const double scale = std::max(1.0, std::abs(ref));
      worst = std::max(worst, std::abs(prod - ref) / scale);
    }
  }
  return worst;
}

SubsetFactorization& update_subset(SubsetFactorization& fact, int feature) {
  fact.toggle(feature);
  return fact;
}

}  // namespace cvsvm

#pragma once

#include <stdexcept>

namespace cvsvm {

// A parameter lies outside its documented domain (gamma <= 0, |rho| >= 1, K > n, ...).
class invalid_parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric breakdown: non-finite inputs, failed Cholesky factorization, ...
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested metric has no defined value on this input (e.g. AUC with one class).
class undefined_metric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented cross-call contract was violated (e.g. fold models with mixed masks).
class contract_violation_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cvsvm

#pragma once

#include <stdexcept>
#include <string>

namespace stircdf {

// Thrown when an iterative scheme exhausts its iteration budget.  For the
// root finders this signals pathological input rather than a tuning issue.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an evaluation would exceed the configured recursion cap; the
// caller should switch to the asymptotic evaluator.
class RecursionCapExceeded : public std::invalid_argument {
 public:
  explicit RecursionCapExceeded(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace stircdf

#pragma once

#include "stircdf/errors.hpp"

namespace stircdf {

inline constexpr long kDefaultRecursionCap = 20000;

// One evaluation point: S'_{n,m}(theta) with 0 <= m <= n and theta > 0.
struct Params {
  long n;
  long m;
  double theta;
  void validate() const;  // throws std::domain_error on violation
};

enum class Branch { S, T };
enum class Method { recurrence, asymptotic, bruteforce };

// Result of one evaluation.  Exactly one of the pair {S', T'} is computed
// directly (the primary branch); the other is its complement, so
// s_prime + t_prime == 1 holds by construction.
struct EvalResult {
  double s_prime;
  double t_prime;
  Branch primary_branch;
  Method method;
  double error_estimate;
};

// S'_{n,m}(theta) by the Stirling-free triangle recursion
//   (theta+n) S'_{n+1,m} = n S'_{n,m} + theta S'_{n,m-1}.
// Picks the primary branch (S or T) up front and runs that triangle; every
// intermediate cell stays in [0,1], so the scheme is overflow-free.
// Throws RecursionCapExceeded for n > cap.
EvalResult s_prime_recursive(const Params& params, long cap = kDefaultRecursionCap);

// The derivative companion Shat'_{n,m}(theta), filled jointly with the
// S-triangle via
//   (theta+n) Shat'_{n+1,m} = n Shat'_{n,m} + theta Shat'_{n,m-1} + S'_{n,m-1}.
double s_hat_recursive(const Params& params, long cap = kDefaultRecursionCap);

// d/dtheta S'_{n,m}(theta) = Shat'_{n,m} - S'_{n,m} * sum_{k=0}^{n-1} 1/(k+theta).
// Evaluated on the primary branch to avoid cancellation in the tails.
double s_prime_derivative(const Params& params, long cap = kDefaultRecursionCap);

// Residual of the defining recursion,
//   (n S'_{n,m} + theta S'_{n,m-1}) / ((theta+n) S'_{n+1,m}) - 1,
// for three values produced by any evaluation method.  Used as the accuracy
// certificate for the asymptotic evaluator.
double recursion_residual(long n, long m, double theta, double s_nm, double s_nm1,
                          double s_np1m);

}  // namespace stircdf

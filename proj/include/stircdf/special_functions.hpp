#pragma once

#include "stircdf/errors.hpp"

namespace stircdf {

// ln Gamma(x) for x > 0.  Relative error <= 1e-14 for x >= 1.
double log_gamma(double x);

// ln Gamma(a + d) - ln Gamma(a), computed without the cancellation of the
// naive difference.  Requires a > 0 and a + d > 0; d may have either sign.
double log_gamma_diff(double a, double d);

// psi^(order)(x) for x > 0; order 0 is the digamma function.  Supported
// orders 0..12 (the phase-function derivatives need up to order 11).
double polygamma(int order, double x);

// ln (theta)_n = ln Gamma(theta + n) - ln Gamma(theta); n >= 0, theta > 0.
double log_pochhammer(double theta, long n);

// Argument triple of the regularized incomplete beta function I_x(p, q).
struct BetaParams {
  double p;
  double q;
  double x;
  void validate() const;  // throws std::domain_error unless 0<=x<=1, p>0, q>0
};

// ln B(p, q)
double log_beta(double p, double q);

// Regularized incomplete beta function I_x(p, q).  Evaluates the smaller of
// the pair {I_x(p,q), I_{1-x}(q,p)} by continued fraction (switch at
// x = p/(p+q)) and complements, so I_x(p,q) + I_{1-x}(q,p) = 1 holds to
// rounding.
double inc_beta(double x, double p, double q);
inline double inc_beta(const BetaParams& bp) { return inc_beta(bp.x, bp.p, bp.q); }

// Finite-sum representation (1+tau)^-n * sum_{j=m}^{n} C(n,j) tau^j of
// I_{tau/(1+tau)}(m, n-m+1).  Exact-summation oracle; rejects n > 60.
double inc_beta_binomial_sum(double tau, int m, int n);

// Solves I_x(p, q) = s for x in (0,1).  Newton from a normal-approximation
// seed with a bisection safeguard; |I_x - s| <= 1e-12 on return.
double inc_beta_inverse(double s, double p, double q);

}  // namespace stircdf

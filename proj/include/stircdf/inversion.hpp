#pragma once

#include <array>
#include <optional>
#include <vector>

#include "stircdf/exact_recurrence.hpp"

namespace stircdf {

enum class InversionMethod { newton, asymptotic, hybrid };

struct InversionResult {
  double theta;
  InversionMethod method;
  int iterations_or_terms;
  double residual;  // |s / S'_{n,m}(theta) - 1|
  std::optional<std::array<double, 3>> tau_terms;  // tau_0, tau_1, tau_2 when asymptotic
  std::vector<double> iterates;                    // Newton trajectory theta_0, theta_1, ...
};

// Solves S'_{n,m}(theta) = s by Newton iteration
//   theta_{j+1} = theta_j - (S'(theta_j) - s)/dS'/dtheta,
// seeded from the reduced equation I_x(m-1, n-m+1) = s via tau = x/(1-x) and
// the phase map.  Evaluation and derivative use the exact recursion for
// n <= cap and the asymptotic representation above.  A bracket on the
// monotone CDF guards every step; the iteration works on the complementary
// branch T' = 1-s when s > 1/2.  Requires 2 <= m <= n (m <= 1 makes S' == 1).
InversionResult invert_newton(long n, long m, double s, double tol = 1e-12,
                              long cap = kDefaultRecursionCap);

// Iteration-free inversion by the expansion tau = tau_0 + tau_1/nu + tau_2/nu^2
// (terms = 1, 2, or 3), with theta recovered through the phase map after each
// correction.  Requires n >= 100 and 2 <= m <= n-1.
InversionResult invert_asymptotic(long n, long m, double s, int terms);

// The transition value theta_t where S' = T' = 1/2 (where Fu's F_s vanishes).
double transition_theta(long n, long m, long cap = kDefaultRecursionCap);

// Fu's F_s = ln(S'/(1-S')), computed from the primary branch: ln S' - log1p(-S')
// below the transition, log1p(-T') - ln T' above.  Returns +/-inf when the
// primary branch underflows to 0.
double fu_fs(const EvalResult& eval);
double fu_fs(long n, long m, double theta, long cap = kDefaultRecursionCap);

// Solves F_s = f, i.e. S' = e^f/(1+e^f); for f > 0 the complementary equation
// T' = 1/(1+e^f) is solved instead.  |f| <= 700.
InversionResult fu_fs_invert(long n, long m, double f, double tol = 1e-12,
                             long cap = kDefaultRecursionCap);

}  // namespace stircdf

#pragma once

#include <span>
#include <vector>

#include "stircdf/exact_recurrence.hpp"
#include "stircdf/saddle_geometry.hpp"

namespace stircdf {

// Coefficient stack of the remainder expansion
//   R'_{n+1,m+1}(theta) = e^{-chi(tau)} C(n, m-1) sum_k G_k(t0) / nu^k
// for one SaddleData.  Index 0 of z_coeffs holds z_1; f/g start at index 0.
struct CoeffSet {
  int order;                     // number of G terms (N)
  std::vector<double> z_coeffs;  // z_1 .. z_K, K = 2N+2
  std::vector<double> f_coeffs;  // f_0 .. f_{K-2} (empty on the near-transition path)
  std::vector<double> g_coeffs;  // g_0 .. g_{K-2}
  std::vector<double> G_values;  // G_0(t0) .. G_N(t0); the last is the error term
  bool near_transition;
};

// Coefficients z_1..z_count of the change of variables z - z0 = sum z_k (t-t0)^k
// defined by phi(z) - phi(z0) = chi(t) - chi(t0).  Obtained by equating Taylor
// coefficients; z_1 = sqrt(chi''(t0)/phi''(z0)) > 0 fixes the branch.
std::vector<double> z_coefficients(const PhaseGeometry& geom, const SaddleData& sd,
                                   int count);

// Taylor coefficients f_0..f_count of f(t) = (1/(z-theta)) dz/dt about t0.
// Requires theta != z0; near the transition use g_coefficients directly.
std::vector<double> f_coefficients(const SaddleData& sd, std::span<const double> z,
                                   int count);

// Taylor coefficients of g(t) = f(t) - 1/(t-tau) about t0.  Away from the
// transition these are f_k - (-1)^k/(t0-tau)^{k+1}; for tau near t0 the pole
// is cancelled algebraically (synthetic division of the z-series), which
// stays finite at tau == t0 exactly.
std::vector<double> g_coefficients(const SaddleData& sd, std::span<const double> z,
                                   int count);

// G_0(t0)..G_{count-1}(t0).  Closed forms for k <= 2; k >= 3 from the
// integration-by-parts scheme H_k = (G_k - G_k(t0))/(t-t0),
// G_{k+1} = -d/dt(t(1+t)H_k) run on the truncated g-series.
std::vector<double> G_values(std::span<const double> g, double t0, int count);

// Same values computed purely by the recursive scheme (no closed forms);
// serves as the cross-check oracle for the k <= 2 closed forms.
std::vector<double> G_values_scheme(std::span<const double> g, double t0, int count);

// True when |tau - t0| is inside the near-transition window where the direct
// pole subtraction in g_k would cancel catastrophically.
bool near_transition(const SaddleData& sd);

CoeffSet make_coeff_set(const PhaseGeometry& geom, const SaddleData& sd, int terms);

// S'_{n,m}(theta) (public indices) by the asymptotic representation
//   S'_{n+1,m+1} = I_x(m, n-m+1) + R',  x = tau/(1+tau),
// with `terms` G-coefficients in R'.  Requires n >= 50 and 2 <= m <= n-1
// (public); the complementary route is used when T' is the primary branch.
EvalResult s_prime_asymptotic(const Params& params, int terms);

// Test hook: the S-route value of S' and the T-route value of T', each
// computed independently; their sum probes the complementary identity.
struct BranchPair {
  double s_route;
  double t_route;
};
BranchPair s_prime_asymptotic_branches(const Params& params, int terms);

// 4 terms up to n = 10^4, 2 terms above.
int default_term_count(long n);

}  // namespace stircdf

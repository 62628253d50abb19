#include "stircdf/exact_recurrence.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stircdf/saddle_geometry.hpp"
#include "stircdf/special_functions.hpp"

namespace stircdf {

namespace {

constexpr double kCellUpper = 1.0 + 1e-12;  // rounding slack for the [0,1] cell assert

void check_cap(long n, long cap) {
  if (n > cap) {
    throw RecursionCapExceeded("recursion cap exceeded (n=" + std::to_string(n) +
                               ", cap=" + std::to_string(cap) +
                               "); use the asymptotic evaluator");
  }
}

// log S'_{n,n}(theta) = -sum_{j=1}^{n-1} log1p(j/theta)
double log_s_diagonal(long n, double theta) {
  double s = 0.0;
  for (long j = 1; j < n; ++j) s -= std::log1p(static_cast<double>(j) / theta);
  return s;
}

// True when T' = 1 - S' is the smaller (primary) branch.  The leading
// incomplete-beta term of the asymptotic representation has its transition
// where theta crosses the saddle point z0, so compare against z0.
bool t_branch_predicted(long n, long m, double theta) {
  if (m <= 1) return true;  // S' == 1 exactly
  if (m == n) {
    return log_s_diagonal(n, theta) > std::log(0.5);
  }
  const PhaseGeometry geom(n - 1, m - 1);
  return theta > geom.z0();
}

struct TriangleValue {
  double value;  // primary-branch value of S' or T'
  double hat;    // companion Shat' or That' (only when requested)
};

// Diagonal seed increment for the T-hat column,
//   That'_{N+1,N+1} = That'_{N,N} + [theta (1 - P_N) + N^2 P_N] / (theta (theta+N)),
// with P_N = S'_{N,N}.  All summands are positive, unlike the naive
// That' = Shat'_{N,0} - Shat'_{N,N} difference which cancels for theta >> N.
double t_hat_diag_increment(long N, double theta, double log_sdiag) {
  const double p = std::exp(log_sdiag);
  const double one_minus_p = -std::expm1(log_sdiag);
  const double nn = static_cast<double>(N);
  return (theta * one_minus_p + nn * nn * p) / (theta * (theta + nn));
}

// Fills the branch triangle in place, optionally carrying the hat companion.
// Works in O(n*m) time and O(m) memory; every cell is a convex combination of
// cells in [0,1].  Both branches obey the same recursion; the T seeds are the
// complements of the Theorem-1 S seeds (verified against the rational oracle).
TriangleValue fill_triangle(long n, long m, double theta, Branch branch, bool with_hat) {
  const bool is_t = branch == Branch::T;

  if (m <= 1) {
    // S'_{n,0} = S'_{n,1} = 1; the hat companion is psi(theta+n) - psi(theta).
    double hat = 0.0;
    if (with_hat && !is_t && n > 0) {
      hat = polygamma(0, theta + static_cast<double>(n)) - polygamma(0, theta);
    }
    return {is_t ? 0.0 : 1.0, hat};
  }
  if (m == n) {
    // Pure diagonal: S'_{n,n} = prod theta/(theta+j).
    const double log_s = log_s_diagonal(n, theta);
    const double s_diag = std::exp(log_s);
    const double value = is_t ? -std::expm1(log_s) : s_diag;
    double hat = 0.0;
    if (with_hat) {
      if (is_t) {
        double acc = 0.0;  // That'_{1,1} = 0
        double lsd = 0.0;  // log S'_{1,1}
        for (long N = 1; N < n; ++N) {
          acc += t_hat_diag_increment(N, theta, lsd);
          lsd -= std::log1p(static_cast<double>(N) / theta);
        }
        hat = acc;
      } else {
        hat = static_cast<double>(n) / theta * s_diag;
      }
    }
    return {value, hat};
  }

  // 2 <= m <= n-1: row-by-row fill up to column m.
  std::vector<double> row(m + 1, 0.0);
  std::vector<double> hat(with_hat ? m + 1 : 0, 0.0);

  // Row N = 2 seeds.
  double log_sdiag = -std::log1p(1.0 / theta);  // log S'_{2,2}
  double psi_sum = 1.0 / theta + 1.0 / (theta + 1.0);  // Shat'_{2,0}
  double t_hat_diag = 1.0 / (theta * (theta + 1.0));   // That'_{2,2}
  row[0] = is_t ? 0.0 : 1.0;
  row[1] = row[0];
  row[2] = is_t ? -std::expm1(log_sdiag) : std::exp(log_sdiag);
  if (with_hat) {
    if (is_t) {
      hat[2] = t_hat_diag;
    } else {
      hat[0] = psi_sum;
      hat[1] = psi_sum;
      hat[2] = 2.0 / (theta + 1.0);
    }
  }

  for (long N = 2; N < n; ++N) {
    const double denom = theta + static_cast<double>(N);
    // New diagonal entry first (it only depends on the previous diagonal).
    if (N + 1 <= m) {
      if (with_hat && is_t) t_hat_diag += t_hat_diag_increment(N, theta, log_sdiag);
      log_sdiag -= std::log1p(static_cast<double>(N) / theta);
      const double s_diag = std::exp(log_sdiag);
      row[N + 1] = is_t ? -std::expm1(log_sdiag) : s_diag;
      if (with_hat) {
        hat[N + 1] = is_t ? t_hat_diag : static_cast<double>(N + 1) / theta * s_diag;
      }
    }
    const long top = std::min(N, static_cast<long>(m));
    for (long k = top; k >= 1; --k) {
      if (with_hat) {
        // Same recursion on both branches; the inhomogeneous term is the
        // branch's own value cell.
        hat[k] = (N * hat[k] + theta * hat[k - 1] + row[k - 1]) / denom;
      }
      row[k] = (N * row[k] + theta * row[k - 1]) / denom;
      assert(row[k] >= 0.0 && row[k] <= kCellUpper);
    }
    if (with_hat && !is_t) {
      psi_sum += 1.0 / (theta + static_cast<double>(N));
      hat[0] = psi_sum;
    }
  }
  return {row[m], with_hat ? hat[m] : 0.0};
}

}  // namespace

void Params::validate() const {
  if (n < 0 || m < 0 || m > n) {
    throw std::domain_error("Params: requires 0 <= m <= n");
  }
  if (!(theta > 0.0)) {
    throw std::domain_error("Params: requires theta > 0");
  }
}

EvalResult s_prime_recursive(const Params& params, long cap) {
  params.validate();
  // The cap guards the O(n*m) triangle; the closed-form edges are O(n).
  if (params.m >= 2 && params.m < params.n) check_cap(params.n, cap);
  const bool t_primary = t_branch_predicted(params.n, params.m, params.theta);
  const Branch branch = t_primary ? Branch::T : Branch::S;
  const TriangleValue tv = fill_triangle(params.n, params.m, params.theta, branch, false);
  EvalResult r{};
  r.primary_branch = branch;
  r.method = Method::recurrence;
  if (t_primary) {
    r.t_prime = tv.value;
    r.s_prime = 1.0 - tv.value;
  } else {
    r.s_prime = tv.value;
    r.t_prime = 1.0 - tv.value;
  }
  r.error_estimate = 2.2e-16 * static_cast<double>(std::max(params.n, 4L)) *
                     std::max(tv.value, 1e-30);
  return r;
}

double s_hat_recursive(const Params& params, long cap) {
  params.validate();
  if (params.m >= 2 && params.m < params.n) check_cap(params.n, cap);
  return fill_triangle(params.n, params.m, params.theta, Branch::S, true).hat;
}

double s_prime_derivative(const Params& params, long cap) {
  params.validate();
  if (params.m >= 2 && params.m < params.n) check_cap(params.n, cap);
  if (params.m <= 1 || params.n == 0) return 0.0;  // S' == 1 identically
  const bool t_primary = t_branch_predicted(params.n, params.m, params.theta);
  const Branch branch = t_primary ? Branch::T : Branch::S;
  const TriangleValue tv = fill_triangle(params.n, params.m, params.theta, branch, true);
  const double psi_sum = polygamma(0, params.theta + static_cast<double>(params.n)) -
                         polygamma(0, params.theta);
  // S-branch: dS/dtheta = Shat - S psi_sum; T-branch: dS/dtheta = T psi_sum - That.
  return t_primary ? tv.value * psi_sum - tv.hat : tv.hat - tv.value * psi_sum;
}

double recursion_residual(long n, long m, double theta, double s_nm, double s_nm1,
                          double s_np1m) {
  if (n < 1 || m < 1 || m > n) {
    throw std::domain_error("recursion_residual: requires 1 <= m <= n");
  }
  if (!(theta > 0.0)) throw std::domain_error("recursion_residual: requires theta > 0");
  if (s_np1m == 0.0) {
    throw std::domain_error("recursion_residual: S'_{n+1,m} must be nonzero");
  }
  return (static_cast<double>(n) * s_nm + theta * s_nm1) /
             ((theta + static_cast<double>(n)) * s_np1m) -
         1.0;
}

}  // namespace stircdf

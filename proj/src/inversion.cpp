#include "stircdf/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stircdf/asymptotic_series.hpp"
#include "stircdf/saddle_geometry.hpp"
#include "stircdf/special_functions.hpp"

namespace stircdf {

namespace {

constexpr int kMaxNewtonIter = 50;
constexpr double kDerivativeFloor = 1e-300;  // below this the tail is flat: bisect

double branch_value(const EvalResult& ev, Branch branch) {
  return branch == Branch::S ? ev.s_prime : ev.t_prime;
}

EvalResult evaluate_any(const Params& p, long cap) {
  if (p.m <= 1 || p.m == p.n || p.n <= cap) return s_prime_recursive(p, cap);
  return s_prime_asymptotic(p, default_term_count(p.n));
}

// d/dtheta of the leading incomplete-beta term; good enough for Newton steps
// when the exact Shat' recursion is out of reach.
double asymptotic_derivative(const PhaseGeometry& geom, double theta) {
  const double tau = geom.tau_from_theta(theta);
  const double x = tau / (1.0 + tau);
  const double m = static_cast<double>(geom.m());
  const double nu = static_cast<double>(geom.nu());
  const double log_pdf = (m - 1.0) * std::log(x) + nu * std::log1p(-x) -
                         log_beta(m, nu + 1.0);
  const double dx_dtau = 1.0 / ((1.0 + tau) * (1.0 + tau));
  const double chi1 = geom.chi_derivative(tau, 1);
  double dtau_dtheta;
  if (std::fabs(tau - geom.t0()) < 1e-8 * std::max(geom.t0(), 1.0) || chi1 == 0.0) {
    // L'Hopital limit of phi'(theta)/chi'(tau) at the saddle
    dtau_dtheta = std::sqrt(geom.phi_derivative(geom.z0(), 2) /
                            geom.chi_derivative(geom.t0(), 2));
  } else {
    dtau_dtheta = geom.phi_derivative(theta, 1) / chi1;
  }
  return std::exp(log_pdf) * dx_dtau * dtau_dtheta;
}

double branch_derivative(const Params& p, Branch branch, long cap) {
  double ds;
  if (p.m <= 1 || p.m == p.n || p.n <= cap) {
    ds = s_prime_derivative(p, cap);
  } else {
    const PhaseGeometry geom(p.n - 1, p.m - 1);
    ds = asymptotic_derivative(geom, p.theta);
  }
  return branch == Branch::S ? ds : -ds;
}

// Seed theta from the reduced equation I_x(m-1, n-m+1) = target via the
// phase map; the T branch works with the complementary beta equation so the
// small quantity is resolved directly.
double newton_seed(long n, long m, Branch branch, double target) {
  if (m == n) {
    const double log_s = branch == Branch::S ? std::log(target) : std::log1p(-target);
    return static_cast<double>(n) * static_cast<double>(n - 1) / (-2.0 * log_s);
  }
  const PhaseGeometry geom(n - 1, m - 1);
  const double p = static_cast<double>(m - 1);
  const double q = static_cast<double>(n - m + 1);
  double tau;
  if (branch == Branch::S) {
    const double x = inc_beta_inverse(target, p, q);
    tau = x / (1.0 - x);
  } else {
    const double y = inc_beta_inverse(target, q, p);  // y = 1 - x
    tau = (1.0 - y) / y;
  }
  return geom.theta_from_tau(tau);
}

struct BranchSolve {
  double theta;
  int iterations;
  double branch_residual;
  std::vector<double> iterates;
};

// Safeguarded Newton for S'(theta) = target (branch S, increasing) or
// T'(theta) = target (branch T, decreasing).
BranchSolve solve_branch(long n, long m, Branch branch, double target, double tol,
                         long cap) {
  if (m < 2 || m > n) {
    throw std::domain_error("inversion: requires 2 <= m <= n (S' == 1 identically for m <= 1)");
  }
  if (!(target > 0.0 && target < 1.0)) {
    throw std::domain_error("inversion: target must lie in (0,1)");
  }
  const bool increasing = branch == Branch::S;
  double theta = newton_seed(n, m, branch, target);
  if (!(theta > 0.0) || !std::isfinite(theta)) theta = 1.0;

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  BranchSolve out{};
  out.iterates.push_back(theta);
  for (int it = 0; it <= kMaxNewtonIter; ++it) {
    const Params p{n, m, theta};
    const double v = branch_value(evaluate_any(p, cap), branch);
    const double resid = v > 0.0 ? std::fabs(target / v - 1.0) : std::numeric_limits<double>::infinity();
    if (resid <= tol) {
      out.theta = theta;
      out.iterations = it;
      out.branch_residual = resid;
      return out;
    }
    if (it == kMaxNewtonIter) break;
    const bool below = (v < target);
    if (below == increasing) {
      lo = theta;
    } else {
      hi = theta;
    }
    const double d = branch_derivative(p, branch, cap);
    double next;
    if (std::fabs(d) < kDerivativeFloor || !std::isfinite(d)) {
      next = std::isinf(hi) ? 4.0 * theta : 0.5 * (lo + hi);
    } else {
      next = theta - (v - target) / d;
      if (!std::isfinite(next) || !(next > lo && next < hi)) {
        next = std::isinf(hi) ? std::max(4.0 * theta, 2.0 * lo) : 0.5 * (lo + hi);
      }
    }
    if (next == theta) {  // floating-point resolution: accept current point
      out.theta = theta;
      out.iterations = it;
      out.branch_residual = resid;
      return out;
    }
    theta = next;
    out.iterates.push_back(theta);
  }
  throw ConvergenceError("inversion: Newton did not reach tol=" + std::to_string(tol) +
                         " within " + std::to_string(kMaxNewtonIter) + " iterations");
}

struct Kernels {
  double k1, k2, k3;
};

// (e^-xi - 1)/xi, (e^-xi - 1 + xi)/xi^2, (e^-xi - 1 + xi - xi^2/2)/xi^3;
// Taylor forms below |xi| = 1e-3 where the direct expressions cancel.
Kernels xi_kernels(double xi) {
  if (std::fabs(xi) < 1e-3) {
    return {
        -1.0 + xi * (0.5 + xi * (-1.0 / 6.0 + xi * (1.0 / 24.0 - xi / 120.0))),
        0.5 + xi * (-1.0 / 6.0 + xi * (1.0 / 24.0 + xi * (-1.0 / 120.0 + xi / 720.0))),
        -1.0 / 6.0 + xi * (1.0 / 24.0 + xi * (-1.0 / 120.0 + xi * (1.0 / 720.0 - xi / 5040.0))),
    };
  }
  const double em = std::expm1(-xi);  // e^-xi - 1
  return {em / xi, (em + xi) / (xi * xi), (em + xi - 0.5 * xi * xi) / (xi * xi * xi)};
}

}  // namespace

InversionResult invert_newton(long n, long m, double s, double tol, long cap) {
  if (!(s > 0.0 && s < 1.0)) {
    throw std::domain_error("invert_newton: requires 0 < s < 1");
  }
  const Branch branch = s > 0.5 ? Branch::T : Branch::S;
  const double target = branch == Branch::S ? s : 1.0 - s;
  const BranchSolve sol = solve_branch(n, m, branch, target, tol, cap);
  InversionResult r{};
  r.theta = sol.theta;
  r.method = InversionMethod::newton;
  r.iterations_or_terms = sol.iterations;
  r.residual = sol.branch_residual;
  r.iterates = sol.iterates;
  return r;
}

InversionResult invert_asymptotic(long n, long m, double s, int terms) {
  if (!(s > 0.0 && s < 1.0)) {
    throw std::domain_error("invert_asymptotic: requires 0 < s < 1");
  }
  if (terms < 1 || terms > 3) {
    throw std::domain_error("invert_asymptotic: terms must be 1, 2, or 3");
  }
  if (n < 100 || m < 2 || m > n - 1) {
    throw std::domain_error("invert_asymptotic: requires n >= 100 and 2 <= m <= n-1");
  }
  const PhaseGeometry geom(n - 1, m - 1);
  const double t0 = geom.t0();
  const double z0 = geom.z0();
  const double nu = static_cast<double>(geom.nu());

  const double x = inc_beta_inverse(s, static_cast<double>(m - 1),
                                    static_cast<double>(n - m + 1));
  const double tau0 = x / (1.0 - x);
  double theta = geom.theta_from_tau(tau0);
  double tau1 = 0.0;
  double tau2 = 0.0;

  if (terms >= 2) {
    const double z1 = std::sqrt(geom.chi_derivative(t0, 2) / geom.phi_derivative(z0, 2));
    const double f_t0 = z1 / (z0 - theta);
    const double arg = (t0 - tau0) * f_t0;
    if (!(arg > 0.0)) {
      throw ConvergenceError("invert_asymptotic: degenerate tau_1 logarithm");
    }
    tau1 = tau0 * (tau0 + 1.0) / (tau0 - t0) * std::log(arg);
    theta = geom.theta_from_tau(tau0 + tau1 / nu);
  }
  if (terms == 3) {
    const double rho0 = (t0 - tau0) / (tau0 * (1.0 + tau0));
    const double denom = tau0 * (1.0 + tau0);
    const double rho_prime = (-denom - (t0 - tau0) * (1.0 + 2.0 * tau0)) / (denom * denom);
    const double xi = tau1 * rho0;
    const Kernels k = xi_kernels(xi);
    // Coefficients G_0, G_1 and G_0'(t0) = g_1 are evaluated at the tau_0 point.
    const double theta0 = geom.theta_from_tau(tau0);
    const SaddleData sd = geom.saddle_data(theta0);
    const CoeffSet cs = make_coeff_set(geom, sd, 2);
    const double g0 = cs.G_values[0];
    const double g_cap1 = cs.G_values[1];
    const double g1 = cs.g_coeffs[1];
    const double rhs = tau1 * k.k1 +
                       (2.0 * tau0 + 1.0) * tau1 * tau1 / denom * k.k2 +
                       rho_prime * tau1 * tau1 * tau1 * k.k3 -
                       denom * (g_cap1 + tau1 * g1 + 0.5 * rho_prime * tau1 * tau1 * g0);
    tau2 = std::exp(xi) * rhs;
    theta = geom.theta_from_tau(tau0 + tau1 / nu + tau2 / (nu * nu));
  }

  InversionResult r{};
  r.theta = theta;
  r.method = InversionMethod::asymptotic;
  r.iterations_or_terms = terms;
  const EvalResult check = evaluate_any(Params{n, m, theta}, kDefaultRecursionCap);
  r.residual = std::fabs(s / check.s_prime - 1.0);
  r.tau_terms = std::array<double, 3>{tau0, tau1, tau2};
  return r;
}

double transition_theta(long n, long m, long cap) {
  return invert_newton(n, m, 0.5, 1e-11, cap).theta;
}

double fu_fs(const EvalResult& eval) {
  if (eval.s_prime <= 0.5) {
    if (eval.s_prime == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(eval.s_prime) - std::log1p(-eval.s_prime);
  }
  if (eval.t_prime == 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p(-eval.t_prime) - std::log(eval.t_prime);
}

double fu_fs(long n, long m, double theta, long cap) {
  return fu_fs(evaluate_any(Params{n, m, theta}, cap));
}

InversionResult fu_fs_invert(long n, long m, double f, double tol, long cap) {
  if (!(std::fabs(f) <= 700.0)) {
    throw std::domain_error("fu_fs_invert: requires |f| <= 700");
  }
  // F_s = f  <=>  S' = e^f/(1+e^f)  <=>  T' = 1/(1+e^f); solve whichever
  // branch carries the small value.
  const Branch branch = f > 0.0 ? Branch::T : Branch::S;
  const double target = f > 0.0 ? std::exp(-f) / (1.0 + std::exp(-f))
                                : std::exp(f) / (1.0 + std::exp(f));
  const BranchSolve sol = solve_branch(n, m, branch, target, tol, cap);
  InversionResult r{};
  r.theta = sol.theta;
  r.method = InversionMethod::newton;
  r.iterations_or_terms = sol.iterations;
  r.residual = sol.branch_residual;
  r.iterates = sol.iterates;
  return r;
}

}  // namespace stircdf

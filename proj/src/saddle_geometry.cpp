#include "stircdf/saddle_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "stircdf/special_functions.hpp"

namespace stircdf {

namespace {

// Safeguarded Newton for a strictly monotone function on a sign-changing
// bracket [lo, hi].  Steps that leave the bracket fall back to bisection.
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo, double hi,
                     double x0, const std::function<bool(double, double)>& converged,
                     const char* what) {
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (converged(x, fx)) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;  // at floating-point resolution
    x = next;
  }
  throw ConvergenceError(std::string(what) + ": no convergence");
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

PhaseGeometry::PhaseGeometry(long n, long m) : n_(n), m_(m) {
  if (m < 1 || m > n - 1) {
    throw std::domain_error("PhaseGeometry: requires 1 <= m <= n-1 (shifted indices)");
  }
  t0_ = static_cast<double>(m) / static_cast<double>(n - m);
  z0_ = solve_saddle();
  phi_z0_ = phi(z0_);
  chi_t0_ = chi(t0_);
  phi2_z0_ = phi_derivative(z0_, 2);
  chi2_t0_ = chi_derivative(t0_, 2);
}

double PhaseGeometry::phi(double z) const {
  if (!(z > 0.0)) throw std::domain_error("phi: requires z > 0");
  return log_gamma_diff(z + 1.0, static_cast<double>(n_)) - m_ * std::log(z);
}

double PhaseGeometry::phi_derivative(double z, int order) const {
  if (!(z > 0.0)) throw std::domain_error("phi_derivative: requires z > 0");
  if (order < 1 || order > 12) {
    throw std::domain_error("phi_derivative: order must be in 1..12");
  }
  const double dn = static_cast<double>(n_);
  const double psi_part = polygamma(order - 1, z + 1.0 + dn) - polygamma(order - 1, z + 1.0);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return psi_part + sign * factorial(order - 1) * m_ * std::pow(z, -order);
}

double PhaseGeometry::phi_diff(double z, double z_ref) const {
  if (!(z > 0.0) || !(z_ref > 0.0)) throw std::domain_error("phi_diff: requires z > 0");
  const double d = z - z_ref;
  if (d == 0.0) return 0.0;
  return log_gamma_diff(z_ref + 1.0 + n_, d) - log_gamma_diff(z_ref + 1.0, d) -
         m_ * std::log1p(d / z_ref);
}

double PhaseGeometry::chi(double t) const {
  if (!(t > 0.0)) throw std::domain_error("chi: requires t > 0");
  return n_ * std::log1p(t) - m_ * std::log(t);
}

double PhaseGeometry::chi_derivative(double t, int order) const {
  if (!(t > 0.0)) throw std::domain_error("chi_derivative: requires t > 0");
  if (order < 1) throw std::domain_error("chi_derivative: order must be >= 1");
  if (order == 1) {
    return (n_ - m_) * (t - t0_) / (t * (1.0 + t));
  }
  const double sign = (order % 2 == 0) ? -1.0 : 1.0;
  return sign * factorial(order - 1) *
         (n_ * std::pow(1.0 + t, -order) - m_ * std::pow(t, -order));
}

double PhaseGeometry::chi_diff(double t, double t_ref) const {
  if (!(t > 0.0) || !(t_ref > 0.0)) throw std::domain_error("chi_diff: requires t > 0");
  const double d = t - t_ref;
  if (d == 0.0) return 0.0;
  return n_ * std::log1p(d / (1.0 + t_ref)) - m_ * std::log1p(d / t_ref);
}

double PhaseGeometry::solve_saddle() const {
  // phi' is strictly increasing through its unique positive zero.
  double lo = 1e-8;
  double hi = 10.0 * static_cast<double>(n_ + m_ + 1);
  while (phi_derivative(hi, 1) <= 0.0) {
    lo = hi;
    hi *= 4.0;  // z0 grows like n^2/(2(n-m)) when m is close to n
  }
  while (phi_derivative(lo, 1) >= 0.0) lo *= 0.25;
  const double guess = t0_ * static_cast<double>(n_) / static_cast<double>(n_ - m_);
  const auto f = [this](double z) { return phi_derivative(z, 1); };
  const auto df = [this](double z) { return phi_derivative(z, 2); };
  const auto done = [this](double z, double fz) {
    return std::fabs(fz) <= 1e-12 * std::fabs(phi_derivative(z, 2) * z);
  };
  return newton_bisect(f, df, lo, hi, guess, done, "saddle_z0");
}

double PhaseGeometry::theta_from_tau(double tau) const {
  if (!(tau > 0.0)) throw std::domain_error("theta_from_tau: requires tau > 0");
  const double c2 = chi_diff(tau, t0_);
  if (c2 <= 0.0) return z0_;  // tau == t0 at this precision
  const bool right = tau > t0_;

  // Quadratic-model seed with a cubic correction: the plain Newton iteration
  // stalls at the double root when theta ~ z0.
  double step = std::sqrt(2.0 * c2 / phi2_z0_);
  const double phi3 = phi_derivative(z0_, 3);
  const double corr = (right ? -1.0 : 1.0) * phi3 * step / (6.0 * phi2_z0_);
  step *= std::max(0.5, 1.0 + corr);

  double lo, hi, x0;
  if (right) {
    lo = z0_;
    hi = z0_ + step;
    while (phi_diff(hi, z0_) < c2) hi = z0_ + 2.0 * (hi - z0_);
    x0 = z0_ + step;
  } else {
    hi = z0_;
    lo = std::max(z0_ - step, 0.25 * z0_);
    while (phi_diff(lo, z0_) < c2) lo *= 0.25;
    x0 = std::max(z0_ - step, 0.5 * lo);
  }
  // Orient so the objective is increasing: on the left branch phi_diff grows
  // toward small theta.
  const double sgn = right ? 1.0 : -1.0;
  const auto f = [&](double z) { return sgn * (phi_diff(z, z0_) - c2); };
  const auto df = [&](double z) { return sgn * phi_derivative(z, 1); };
  const auto done = [&](double z, double fz) {
    (void)z;
    return std::fabs(fz) <= 1e-13 * c2;
  };
  // With the sign factor the objective increases across either bracket.
  return newton_bisect(f, df, lo, hi, x0, done, "theta_from_tau");
}

double PhaseGeometry::tau_from_theta(double theta) const {
  if (!(theta > 0.0)) throw std::domain_error("tau_from_theta: requires theta > 0");
  const double c2 = phi_diff(theta, z0_);
  if (c2 <= 0.0) return t0_;
  const bool right = theta > z0_;

  double step = std::sqrt(2.0 * c2 / chi2_t0_);
  const double chi3 = chi_derivative(t0_, 3);
  const double corr = (right ? -1.0 : 1.0) * chi3 * step / (6.0 * chi2_t0_);
  step *= std::max(0.5, 1.0 + corr);

  double lo, hi, x0;
  if (right) {
    lo = t0_;
    hi = t0_ + step;
    while (chi_diff(hi, t0_) < c2) hi = t0_ + 2.0 * (hi - t0_);
    x0 = t0_ + step;
  } else {
    hi = t0_;
    lo = std::max(t0_ - step, 0.25 * t0_);
    while (chi_diff(lo, t0_) < c2) lo *= 0.25;
    x0 = std::max(t0_ - step, 0.5 * lo);
  }
  const double sgn = right ? 1.0 : -1.0;
  const auto f = [&](double t) { return sgn * (chi_diff(t, t0_) - c2); };
  const auto df = [&](double t) { return sgn * chi_derivative(t, 1); };
  const auto done = [&](double t, double ft) {
    (void)t;
    return std::fabs(ft) <= 1e-13 * c2;
  };
  return newton_bisect(f, df, lo, hi, x0, done, "tau_from_theta");
}

SaddleData PhaseGeometry::saddle_data(double theta) const {
  SaddleData sd{};
  sd.n = n_;
  sd.m = m_;
  sd.nu = n_ - m_;
  sd.z0 = z0_;
  sd.t0 = t0_;
  sd.phi_at_z0 = phi_z0_;
  sd.chi_at_t0 = chi_t0_;
  sd.theta = theta;
  sd.tau = tau_from_theta(theta);
  sd.chi_at_tau = chi(sd.tau);
  return sd;
}

}  // namespace stircdf

#pragma once

#include "stircdf/errors.hpp"

namespace stircdf {

// Geometric quantities of one (n, m, theta) point in the shifted-index
// convention (these n, m are the phase-function parameters of the
// S'_{n+1,m+1} representation; the public S'_{N,M} maps to n = N-1, m = M-1).
struct SaddleData {
  long n;
  long m;
  long nu;            // n - m
  double z0;          // saddle: positive root of phi'(z) = 0
  double t0;          // m / (n - m), minimum of chi
  double phi_at_z0;
  double chi_at_t0;
  double theta;
  double tau;         // phase image of theta: phi(theta)-phi(z0) = chi(tau)-chi(t0)
  double chi_at_tau;
};

// Phase functions
//   phi(z) = ln Gamma(z+1+n) - ln Gamma(z+1) - m ln z,
//   chi(t) = n ln(1+t)      - m ln t,
// their derivatives, the saddle point z0, and the branch-matched theta <-> tau
// correspondence.  Shifted-index convention throughout; requires 1 <= m <= n-1.
class PhaseGeometry {
 public:
  PhaseGeometry(long n, long m);

  long n() const { return n_; }
  long m() const { return m_; }
  long nu() const { return n_ - m_; }
  double t0() const { return t0_; }
  double z0() const { return z0_; }
  double phi_at_z0() const { return phi_z0_; }
  double chi_at_t0() const { return chi_t0_; }

  double phi(double z) const;
  // phi^(k)(z) for 1 <= k <= 12
  double phi_derivative(double z, int order) const;
  // phi(z) - phi(z_ref), free of the large-scale cancellation of the direct
  // difference (needed when z is near the saddle)
  double phi_diff(double z, double z_ref) const;

  double chi(double t) const;
  // chi^(k)(t); order 1 uses the factored form nu (t - t0) / (t (1+t))
  double chi_derivative(double t, int order) const;
  double chi_diff(double t, double t_ref) const;

  // Unique solution of chi(tau) - chi(t0) = phi(theta) - phi(z0) with
  // sign(tau - t0) = sign(theta - z0), and its inverse.
  double tau_from_theta(double theta) const;
  double theta_from_tau(double tau) const;

  SaddleData saddle_data(double theta) const;

 private:
  double solve_saddle() const;

  long n_;
  long m_;
  double t0_;
  double z0_;
  double phi_z0_;
  double chi_t0_;
  double phi2_z0_;  // phi''(z0), cached for branch seeds
  double chi2_t0_;  // chi''(t0)
};

}  // namespace stircdf

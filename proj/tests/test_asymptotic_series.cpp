#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "stircdf/asymptotic_series.hpp"
#include "stircdf/exact_recurrence.hpp"

using namespace stircdf;

namespace {

// Example 2 working point: S'_{100,50} at the first-order inverse theta.
struct Ex2 {
  PhaseGeometry geom{99, 49};
  double theta = 38.29722;
  SaddleData sd;
  Ex2() { sd = geom.saddle_data(theta); }
};

// The map t -> z(t) defined by phi(z)-phi(z0) = chi(t)-chi(t0) with matching
// branches; built from the phase solver, independent of the series expansion.
std::function<double(double)> z_of_t(const PhaseGeometry& geom) {
  return [&geom](double t) { return geom.theta_from_tau(t); };
}

}  // namespace

TEST_CASE("z-series: closed forms and positivity") {
  Ex2 e;
  const auto z = z_coefficients(e.geom, e.sd, 6);
  const double phi2 = e.geom.phi_derivative(e.sd.z0, 2);
  const double phi3 = e.geom.phi_derivative(e.sd.z0, 3);
  const double chi2 = e.geom.chi_derivative(e.sd.t0, 2);
  const double chi3 = e.geom.chi_derivative(e.sd.t0, 3);
  const double z1 = std::sqrt(chi2 / phi2);
  CHECK(z[0] > 0.0);
  CHECK(z[0] == doctest::Approx(z1).epsilon(1e-14));
  const double z2 = (chi3 - z1 * z1 * z1 * phi3) / (6.0 * z1 * phi2);
  CHECK(z[1] == doctest::Approx(z2).epsilon(1e-12));
}

TEST_CASE("z-series against the numeric transformation oracle") {
  Ex2 e;
  const auto z = z_coefficients(e.geom, e.sd, 6);
  const auto zmap = z_of_t(e.geom);
  const auto fit = oracles::taylor_fit(zmap, e.sd.t0, 0.004);
  CHECK(z[0] == doctest::Approx(fit.c1).epsilon(1e-7));
  CHECK(z[1] == doctest::Approx(fit.c2).epsilon(1e-5));
  CHECK(z[2] == doctest::Approx(fit.c3).epsilon(1e-4));
}

TEST_CASE("f-series: paper closed forms for f0, f1, f2") {
  Ex2 e;
  const auto z = z_coefficients(e.geom, e.sd, 6);
  const auto f = f_coefficients(e.sd, z, 4);
  const double D = e.sd.z0 - e.sd.theta;
  const double f0 = z[0] / D;
  CHECK(f0 > 0.0);  // theta < z0 and z1 > 0
  CHECK(f[0] == doctest::Approx(f0).epsilon(1e-13));
  // f1 = (2 z2 z0 - 2 z2 theta - z1^2)/(theta-z0)^2
  const double f1 = (2.0 * z[1] * e.sd.z0 - 2.0 * z[1] * e.sd.theta - z[0] * z[0]) / (D * D);
  CHECK(f[1] == doctest::Approx(f1).epsilon(1e-12));
  // f2 per the cubic-denominator expression
  const double th = e.sd.theta;
  const double z0 = e.sd.z0;
  const double f2 = (6.0 * z[2] * z0 * th + 3.0 * z[0] * z[1] * z0 - 3.0 * z[0] * z[1] * th -
                     z[0] * z[0] * z[0] - 3.0 * z[2] * z0 * z0 - 3.0 * z[2] * th * th) /
                    ((th - z0) * (th - z0) * (th - z0));
  CHECK(f[2] == doctest::Approx(f2).epsilon(1e-11));
}

TEST_CASE("f-series against the numeric f(t) oracle") {
  Ex2 e;
  const auto z = z_coefficients(e.geom, e.sd, 6);
  const auto f = f_coefficients(e.sd, z, 4);
  const auto zmap = z_of_t(e.geom);
  const auto f_oracle = [&](double t) {
    const double zt = zmap(t);
    const double dz_dt = e.geom.chi_derivative(t, 1) / e.geom.phi_derivative(zt, 1);
    return dz_dt / (zt - e.sd.theta);
  };
  // t0 is a regular point of f (the pole sits at tau != t0)
  const auto fit = oracles::taylor_fit(f_oracle, e.sd.t0, 0.002);
  CHECK(f[0] == doctest::Approx(f_oracle(e.sd.t0)).epsilon(1e-8));
  CHECK(f[1] == doctest::Approx(fit.c1).epsilon(1e-5));
  CHECK(f[2] == doctest::Approx(fit.c2).epsilon(1e-4));
}

TEST_CASE("g-series: pole subtraction at the Example 2 point") {
  Ex2 e;
  const auto z = z_coefficients(e.geom, e.sd, 6);
  const auto f = f_coefficients(e.sd, z, 4);
  const auto g = g_coefficients(e.sd, z, 4);
  CHECK(!near_transition(e.sd));
  CHECK(g[0] == doctest::Approx(f[0] - 1.0 / (e.sd.t0 - e.sd.tau)).epsilon(1e-12));
  // numeric g(t) oracle for the slope
  const auto zmap = z_of_t(e.geom);
  const auto g_oracle = [&](double t) {
    const double zt = zmap(t);
    const double dz_dt = e.geom.chi_derivative(t, 1) / e.geom.phi_derivative(zt, 1);
    return dz_dt / (zt - e.sd.theta) - 1.0 / (t - e.sd.tau);
  };
  const auto fit = oracles::taylor_fit(g_oracle, e.sd.t0, 0.002);
  CHECK(g[0] == doctest::Approx(g_oracle(e.sd.t0)).epsilon(1e-7));
  CHECK(g[1] == doctest::Approx(fit.c1).epsilon(1e-5));
}

TEST_CASE("g-series limit at tau == t0 matches two-sided evaluations") {
  // Exactly at the transition theta = z0 the pole cancellation is removable;
  // the algebraic path must agree with evaluations nudged to tau = t0(1 +- 1e-6).
  PhaseGeometry geom(99, 49);
  const SaddleData at = geom.saddle_data(geom.z0());
  CHECK(at.tau == doctest::Approx(at.t0).epsilon(1e-12));
  const auto z = z_coefficients(geom, at, 10);
  const auto g_at = g_coefficients(geom.saddle_data(geom.z0()), z, 4);
  for (double sign : {-1.0, 1.0}) {
    const double tau_near = at.t0 * (1.0 + sign * 1e-6);
    const double theta_near = geom.theta_from_tau(tau_near);
    const SaddleData sd_near = geom.saddle_data(theta_near);
    CHECK(near_transition(sd_near));
    const auto z_near = z_coefficients(geom, sd_near, 10);
    const auto g_near = g_coefficients(sd_near, z_near, 4);
    for (int k = 0; k <= 4; ++k) {
      CHECK(g_near[k] == doctest::Approx(g_at[k]).epsilon(1e-5));
    }
  }
}

TEST_CASE("near and direct g paths agree across the window boundary") {
  PhaseGeometry geom(999, 449);
  // pick tau just outside the near window and compare both computations
  const double width = 0.05 * std::max(geom.t0(), 1.0);
  for (double frac : {1.05, 1.3, 2.0}) {
    const double tau = geom.t0() - frac * width;
    const double theta = geom.theta_from_tau(tau);
    const SaddleData sd = geom.saddle_data(theta);
    CHECK(!near_transition(sd));
    const auto z = z_coefficients(geom, sd, 10);
    const auto g_direct = g_coefficients(sd, z, 6);
    // force the algebraic path through an sd clone inside the window check
    const auto f = f_coefficients(sd, z, 6);
    std::vector<double> g_explicit(7);
    double pole = 1.0 / (sd.t0 - sd.tau);
    for (int k = 0; k <= 6; ++k) {
      g_explicit[k] = f[k] - pole;
      pole *= -1.0 / (sd.t0 - sd.tau);
    }
    for (int k = 0; k <= 6; ++k) {
      CHECK(g_direct[k] == doctest::Approx(g_explicit[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("G values: closed forms and the recursive scheme") {
  // formula instantiation: g1=1, g2=0, t0=1 -> G1 = -3
  {
    std::vector<double> g{0.0, 1.0, 0.0, 0.0, 0.0};
    CHECK(G_values(g, 1.0, 2)[1] == doctest::Approx(-3.0).epsilon(1e-15));
  }
  // G0 = g0
  {
    std::vector<double> g{2.5, -1.0, 0.5, 0.0, 0.0};
    CHECK(G_values(g, 0.7, 1)[0] == 2.5);
  }
  // closed forms agree with the polynomial scheme on random g vectors
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ug(-2.0, 2.0);
  std::uniform_real_distribution<double> ut(0.05, 9.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> g(7);
    for (auto& v : g) v = ug(rng);
    const double t0 = ut(rng);
    const auto closed = G_values(g, t0, 3);
    const auto scheme = G_values_scheme(g, t0, 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(closed[k] == doctest::Approx(scheme[k]).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(G_values(std::vector<double>{1.0, 2.0}, 1.0, 3), std::domain_error);
}

TEST_CASE("asymptotic evaluation reproduces Example 2") {
  // step 5: S'_{100,50}(38.29722) ~ 0.50233
  const EvalResult a = s_prime_asymptotic(Params{100, 50, 38.29722}, 2);
  CHECK(std::fabs(a.s_prime - 0.50233) <= 5e-4);
  // step 8: S'_{100,50}(38.2492993) ~ 0.5000190
  const EvalResult b = s_prime_asymptotic(Params{100, 50, 38.2492993}, 2);
  CHECK(std::fabs(b.s_prime - 0.5000190) <= 2e-5);
  // more terms should agree with the recursion even better
  const EvalResult c = s_prime_asymptotic(Params{100, 50, 38.29722}, 4);
  const EvalResult exact = s_prime_recursive(Params{100, 50, 38.29722});
  CHECK(c.s_prime == doctest::Approx(exact.s_prime).epsilon(5e-7));
  CHECK(a.method == Method::asymptotic);
  CHECK(a.error_estimate >= 0.0);
}

TEST_CASE("section 5.1 spot values at n = 100000") {
  const PhaseGeometry geom(99999, 74999);
  const double z0 = geom.z0();
  CHECK(std::fabs(z0 - 136312.21) <= 0.5);
  const EvalResult low = s_prime_asymptotic(Params{100000, 75000, 0.97 * z0}, 2);
  CHECK(low.s_prime == doctest::Approx(0.300778124649e-4).epsilon(1e-8));
  const EvalResult mid = s_prime_asymptotic(Params{100000, 75000, 1.00 * z0}, 2);
  CHECK(mid.s_prime == doctest::Approx(0.501722781430).epsilon(1e-8));
}

TEST_CASE("complementary consistency of the two routes") {
  for (const auto& [n, m] : {std::pair<long, long>{100, 50}, {1000, 450}, {1000, 900}}) {
    const PhaseGeometry geom(n - 1, m - 1);
    for (double scale : {0.8, 0.95, 1.0, 1.05, 1.3}) {
      const Params p{n, m, scale * geom.z0()};
      const BranchPair both = s_prime_asymptotic_branches(p, 4);
      CHECK(std::fabs(both.s_route + both.t_route - 1.0) <= 1e-12);
      const EvalResult ev = s_prime_asymptotic(p, 4);
      CHECK(ev.s_prime + ev.t_prime == 1.0);
    }
  }
}

TEST_CASE("asymptotic vs recursion at n = 1000 away from the transition") {
  for (long m : {150L, 450L, 900L}) {
    const PhaseGeometry geom(999, m - 1);
    for (double scale : {0.7, 0.9, 1.1}) {
      const double theta = scale * geom.z0();
      if (std::fabs(theta - geom.z0()) <= 0.05 * geom.z0()) continue;
      const double a = s_prime_asymptotic(Params{1000, m, theta}, 4).s_prime;
      const double r = s_prime_recursive(Params{1000, m, theta}).s_prime;
      CHECK(a == doctest::Approx(r).epsilon(1e-9));
    }
  }
}

TEST_CASE("term decay away from the transition") {
  const PhaseGeometry geom(999, 449);
  const SaddleData sd = geom.saddle_data(0.8 * geom.z0());
  const CoeffSet cs = make_coeff_set(geom, sd, 4);
  const double nu = static_cast<double>(sd.nu);
  double prev = std::fabs(cs.G_values[0]);
  for (int k = 1; k < 4; ++k) {
    const double cur = std::fabs(cs.G_values[k]) / std::pow(nu, k);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("recursion residual of asymptotic values (Table 3 sampling)") {
  for (long n : {200L, 630L, 2000L}) {
    for (double frac : {0.15, 0.45, 0.75, 0.9}) {
      const long m = std::max(2L, static_cast<long>(frac * n + 0.5));
      const PhaseGeometry geom(n - 1, m - 1);
      for (double rho : {0.7, 0.8, 0.9, 1.0}) {
        const double theta = rho * geom.z0();
        const double s_nm = s_prime_asymptotic(Params{n, m, theta}, 4).s_prime;
        const double s_nm1 = s_prime_asymptotic(Params{n, m - 1, theta}, 4).s_prime;
        const double s_np1m = s_prime_asymptotic(Params{n + 1, m, theta}, 4).s_prime;
        const double resid = recursion_residual(n, m, theta, s_nm, s_nm1, s_np1m);
        CHECK(std::fabs(resid) <= 1e-10);
      }
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(s_prime_asymptotic(Params{40, 20, 5.0}, 2), std::domain_error);
  CHECK_THROWS_AS(s_prime_asymptotic(Params{100, 1, 5.0}, 2), std::domain_error);
  CHECK_THROWS_AS(s_prime_asymptotic(Params{100, 100, 5.0}, 2), std::domain_error);
  CHECK_THROWS_AS(s_prime_asymptotic(Params{100, 50, 5.0}, 0), std::domain_error);
  CHECK_THROWS_AS(s_prime_asymptotic(Params{100, 50, 5.0}, 9), std::domain_error);
}

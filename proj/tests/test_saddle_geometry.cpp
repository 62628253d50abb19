#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stircdf/saddle_geometry.hpp"

using namespace stircdf;

// Example 2 geometry: S'_{100,50} -> shifted (99, 49).
namespace {
const PhaseGeometry& ex2() {
  static const PhaseGeometry geom(99, 49);
  return geom;
}
}  // namespace

TEST_CASE("saddle point of Example 2") {
  CHECK(std::fabs(ex2().z0() - 39.1327) <= 5e-4);
  CHECK(ex2().t0() == doctest::Approx(0.98).epsilon(1e-15));
  // phi'(z0) = 0 on the phi'' z0 scale
  const double scale = std::fabs(ex2().phi_derivative(ex2().z0(), 2) * ex2().z0());
  CHECK(std::fabs(ex2().phi_derivative(ex2().z0(), 1)) <= 1e-10 * scale);
}

TEST_CASE("phase values of Example 2") {
  CHECK(std::fabs(ex2().phi_at_z0() - 259.198) <= 5e-3);
  CHECK(std::fabs(ex2().chi_at_t0() - 68.6165) <= 5e-4);
  CHECK(std::fabs(ex2().chi(0.960527) - 68.6215) <= 5e-4);
}

TEST_CASE("phi derivatives against finite differences") {
  const PhaseGeometry geom(20, 8);
  const auto dphi = [&](double z) { return geom.phi_derivative(z, 1); };
  CHECK(geom.phi_derivative(5.0, 2) ==
        doctest::Approx(oracles::fd1(dphi, 5.0, 1e-4)).epsilon(1e-7));
  const auto d2phi = [&](double z) { return geom.phi_derivative(z, 2); };
  CHECK(geom.phi_derivative(5.0, 3) ==
        doctest::Approx(oracles::fd1(d2phi, 5.0, 1e-4)).epsilon(1e-7));
  // phi itself vs its derivative
  const auto phi = [&](double z) { return geom.phi(z); };
  CHECK(geom.phi_derivative(5.0, 1) ==
        doctest::Approx(oracles::fd1(phi, 5.0, 1e-5)).epsilon(1e-8));
}

TEST_CASE("chi closed-form derivatives") {
  const PhaseGeometry geom(99, 49);
  CHECK(geom.chi_derivative(geom.t0(), 1) == 0.0);
  const auto chi1 = [&](double t) { return geom.chi_derivative(t, 1); };
  CHECK(geom.chi_derivative(0.7, 2) ==
        doctest::Approx(oracles::fd1(chi1, 0.7, 1e-6)).epsilon(1e-8));
  // chi'(t) = (n-m)(t-t0)/(t(1+t)) matches n/(1+t) - m/t
  for (double t : {0.1, 0.5, 0.98, 3.0}) {
    CHECK(geom.chi_derivative(t, 1) ==
          doctest::Approx(99.0 / (1.0 + t) - 49.0 / t).epsilon(1e-12));
  }
}

TEST_CASE("saddle against bisection oracle") {
  for (const auto& [n, m] : {std::pair<long, long>{20, 10}, {24, 9}, {150, 120}, {999, 149}}) {
    const PhaseGeometry geom(n, m);
    const double root = oracles::bisect(
        [&](double z) { return geom.phi_derivative(z, 1); }, 1e-6, 10.0 * n * n, 1e-14);
    CHECK(geom.z0() == doctest::Approx(root).epsilon(1e-9));
  }
}

TEST_CASE("section 5.1 reading: z0 = 136312.21 comes from the public indices") {
  // "n=100.000, m=75.000" displayed in the paper are the public S' indices;
  // the phase parameters are the shifted (99999, 74999).
  const PhaseGeometry shifted(99999, 74999);
  CHECK(std::fabs(shifted.z0() - 136312.21) <= 0.5);
  // the direct reading lands >1 off, well outside the printed precision
  const PhaseGeometry direct(100000, 75000);
  CHECK(std::fabs(direct.z0() - 136312.21) > 0.5);
}

TEST_CASE("theta/tau correspondence of Example 2") {
  CHECK(std::fabs(ex2().theta_from_tau(0.960527) - 38.29722) <= 1e-4);
  CHECK(std::fabs(ex2().theta_from_tau(0.959409535) - 38.2492993) <= 1e-5);
  CHECK(ex2().tau_from_theta(ex2().z0()) == doctest::Approx(ex2().t0()).epsilon(1e-12));
  CHECK(ex2().theta_from_tau(ex2().t0()) == doctest::Approx(ex2().z0()).epsilon(1e-12));
}

TEST_CASE("round trip theta -> tau -> theta") {
  for (const auto& [n, m] : {std::pair<long, long>{99, 49}, {30, 5}, {249, 199}, {2000, 1800}}) {
    const PhaseGeometry geom(n, m);
    for (double scale : {0.2, 0.5, 0.9, 0.99, 1.0, 1.01, 1.3, 2.0, 5.0}) {
      const double theta = scale * geom.z0();
      const double tau = geom.tau_from_theta(theta);
      const double back = geom.theta_from_tau(tau);
      CHECK(back == doctest::Approx(theta).epsilon(1e-9));
      // matching branches
      CHECK(((tau >= geom.t0()) == (theta >= geom.z0()) || scale == 1.0));
    }
  }
}

TEST_CASE("branch map is monotone and the phase differences are nonnegative") {
  const PhaseGeometry geom(99, 49);
  double prev = 0.0;
  for (double scale : {0.3, 0.5, 0.7, 0.9, 0.97, 1.0, 1.05, 1.3, 2.0, 4.0}) {
    const double theta = scale * geom.z0();
    const double tau = geom.tau_from_theta(theta);
    CHECK(tau > prev);
    prev = tau;
    CHECK(geom.phi_diff(theta, geom.z0()) >= 0.0);
    CHECK(geom.chi_diff(tau, geom.t0()) >= 0.0);
    // defining relation phi(theta)-phi(z0) = chi(tau)-chi(t0)
    const double lhs = geom.phi_diff(theta, geom.z0());
    const double rhs = geom.chi_diff(tau, geom.t0());
    if (lhs > 0.0) CHECK(rhs == doctest::Approx(lhs).epsilon(1e-10));
  }
}

TEST_CASE("phases are convex around their unique minima") {
  // Convexity holds in the saddle neighbourhood the quadratic seeds use;
  // far to the right both phases turn increasing-concave (chi'' changes sign
  // at t = 1/(sqrt(n/m)-1)), which is why the solvers only ever rely on the
  // global sign structure of the first derivatives.
  for (const auto& [n, m] : {std::pair<long, long>{50, 25}, {999, 449}}) {
    const PhaseGeometry geom(n, m);
    for (double u : {0.4, 0.7, 1.0, 1.3, 1.7}) {
      CHECK(geom.phi_derivative(u * geom.z0(), 2) > 0.0);
      CHECK(geom.chi_derivative(u * geom.t0(), 2) > 0.0);
    }
    // first-derivative sign structure is global
    for (double u : {0.05, 0.5, 2.0, 50.0}) {
      CHECK((geom.phi_derivative(u * geom.z0(), 1) < 0.0) == (u < 1.0));
      CHECK((geom.chi_derivative(u * geom.t0(), 1) < 0.0) == (u < 1.0));
    }
  }
}

TEST_CASE("phi_diff matches the plain difference away from the saddle") {
  const PhaseGeometry geom(99, 49);
  for (double z : {5.0, 20.0, 39.0, 70.0, 300.0}) {
    CHECK(geom.phi_diff(z, geom.z0()) ==
          doctest::Approx(geom.phi(z) - geom.phi_at_z0()).epsilon(1e-9));
  }
  const PhaseGeometry big(99999, 74999);
  for (double scale : {0.9, 0.999, 1.001, 1.2}) {
    const double z = scale * big.z0();
    CHECK(big.phi_diff(z, big.z0()) ==
          doctest::Approx(big.phi(z) - big.phi_at_z0()).epsilon(1e-7));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(PhaseGeometry(10, 0), std::domain_error);
  CHECK_THROWS_AS(PhaseGeometry(10, 10), std::domain_error);
  CHECK_THROWS_AS(ex2().phi(-1.0), std::domain_error);
  CHECK_THROWS_AS(ex2().chi(0.0), std::domain_error);
  CHECK_THROWS_AS(ex2().tau_from_theta(-2.0), std::domain_error);
}

#include "stircdf/asymptotic_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stircdf/special_functions.hpp"

namespace stircdf {

namespace {

constexpr int kMaxTerms = 5;
constexpr double kNearTransitionWidth = 0.05;  // |tau-t0| < width*max(t0,1)
constexpr long kAsymptoticFloor = 50;

// p * q truncated to degree L (inclusive).
std::vector<double> mul_trunc(std::span<const double> p, std::span<const double> q,
                              std::size_t L) {
  std::vector<double> r(L + 1, 0.0);
  for (std::size_t i = 0; i < p.size() && i <= L; ++i) {
    if (p[i] == 0.0) continue;
    const std::size_t jmax = std::min(q.size() - 1, L - i);
    for (std::size_t j = 0; j <= jmax; ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

// p / q truncated to degree L; q[0] != 0.
std::vector<double> div_trunc(std::span<const double> p, std::span<const double> q,
                              std::size_t L) {
  std::vector<double> r(L + 1, 0.0);
  for (std::size_t i = 0; i <= L; ++i) {
    double acc = i < p.size() ? p[i] : 0.0;
    for (std::size_t j = 1; j <= i && j < q.size(); ++j) acc -= q[j] * r[i - j];
    r[i] = acc / q[0];
  }
  return r;
}

}  // namespace

std::vector<double> z_coefficients(const PhaseGeometry& geom, const SaddleData& sd,
                                   int count) {
  if (count < 1 || count > 2 * kMaxTerms + 2) {
    throw std::domain_error("z_coefficients: unsupported count");
  }
  // Taylor coefficients a_k = phi^(k)(z0)/k!, b_k = chi^(k)(t0)/k!, k = 2..count+1.
  const int K = count;
  std::vector<double> a(K + 2, 0.0), b(K + 2, 0.0);
  double fact = 2.0;
  for (int k = 2; k <= K + 1; ++k) {
    a[k] = geom.phi_derivative(sd.z0, k) / fact;
    b[k] = geom.chi_derivative(sd.t0, k) / fact;
    fact *= k + 1;
  }
  if (!(b[2] / a[2] > 0.0)) {
    throw std::domain_error("z_coefficients: nonpositive chi''(t0)/phi''(z0)");
  }
  std::vector<double> z(K + 1, 0.0);  // z[1..K]
  z[1] = std::sqrt(b[2] / a[2]);
  // Order w^r of  sum_k a_k u(w)^k = sum_k b_k w^k  determines z_{r-1}: the
  // unknown enters the left side only through 2 a_2 z_1 z_{r-1}.
  for (int r = 3; r <= K + 1; ++r) {
    std::vector<double> u(r + 1, 0.0);  // u(w) with z_{r-1} set to 0
    for (int k = 1; k <= r - 2; ++k) u[k] = z[k];
    double cr = 0.0;
    std::vector<double> power = u;  // u^k, truncated at degree r
    for (int k = 2; k <= r; ++k) {
      power = mul_trunc(power, u, r);
      cr += a[k] * power[r];
    }
    z[r - 1] = (b[r] - cr) / (2.0 * a[2] * z[1]);
  }
  return std::vector<double>(z.begin() + 1, z.end());
}

std::vector<double> f_coefficients(const SaddleData& sd, std::span<const double> z,
                                   int count) {
  if (sd.theta == sd.z0) {
    throw std::domain_error("f_coefficients: theta == z0 (use the near-transition path)");
  }
  if (z.size() < static_cast<std::size_t>(count + 1)) {
    throw std::domain_error("f_coefficients: needs z_1..z_{count+1}");
  }
  // f = (dz/dt) / (z - theta): A[i] = (i+1) z_{i+1}, Z[0] = z0 - theta, Z[i] = z_i.
  std::vector<double> A(count + 1), Z(count + 1);
  for (int i = 0; i <= count; ++i) A[i] = (i + 1) * z[i];
  Z[0] = sd.z0 - sd.theta;
  for (int i = 1; i <= count; ++i) Z[i] = z[i - 1];
  return div_trunc(A, Z, count);
}

bool near_transition(const SaddleData& sd) {
  return std::fabs(sd.tau - sd.t0) < kNearTransitionWidth * std::max(sd.t0, 1.0);
}

namespace {

// Near-transition g-series: with omega = tau - t0 and the z-series z(w),
//   z(w) - theta = (w - omega) Q(w),  Q_i = sum_j z_{i+1+j} omega^j,
// so g = (dz/dt - Q)/((w - omega) Q); the numerator vanishes at w = omega and
// the division by (w - omega) is done synthetically.  Exact at omega == 0.
std::vector<double> g_coefficients_near(const SaddleData& sd, std::span<const double> z,
                                        int count) {
  const double omega = sd.tau - sd.t0;
  const int K = static_cast<int>(z.size());  // z_1..z_K available
  std::vector<double> q(K, 0.0);
  for (int i = 0; i < K; ++i) {
    // q_i = z_{i+1} + z_{i+2} omega + ... , highest available term z_K
    double acc = 0.0;
    for (int j = K - 1 - i; j >= 0; --j) acc = acc * omega + z[i + j];
    q[i] = acc;
  }
  std::vector<double> num(K, 0.0);
  for (int i = 0; i < K; ++i) num[i] = (i + 1) * z[i] - q[i];
  // Synthetic division by (w - omega); the remainder is the truncation defect
  // and is dropped.
  std::vector<double> M(K - 1, 0.0);
  M[K - 2] = num[K - 1];
  for (int i = K - 2; i >= 1; --i) M[i - 1] = num[i] + omega * M[i];
  if (count > K - 2) throw std::domain_error("g_coefficients: count too large for z-series");
  return div_trunc(M, q, count);
}

}  // namespace

std::vector<double> g_coefficients(const SaddleData& sd, std::span<const double> z,
                                   int count) {
  if (near_transition(sd)) return g_coefficients_near(sd, z, count);
  const auto f = f_coefficients(sd, z, count);
  const double r = 1.0 / (sd.t0 - sd.tau);
  std::vector<double> g(count + 1);
  double pole = r;  // (-1)^k r^{k+1}
  for (int k = 0; k <= count; ++k) {
    g[k] = f[k] - pole;
    pole *= -r;
  }
  return g;
}

std::vector<double> G_values_scheme(std::span<const double> g, double t0, int count) {
  if (count < 1) return {};
  if (g.size() < static_cast<std::size_t>(2 * count - 1)) {
    throw std::domain_error("G_values: needs g_0..g_{2(count-1)}");
  }
  const double A = t0 * (1.0 + t0);
  const double B = 1.0 + 2.0 * t0;
  std::vector<double> values;
  values.reserve(count);
  std::vector<double> G(g.begin(), g.end());
  values.push_back(G[0]);
  for (int k = 1; k < count; ++k) {
    // H(w) = (G(w) - G(0))/w, P = (A + Bw + w^2) H, G_next = -P'.
    std::vector<double> H(G.begin() + 1, G.end());
    const std::size_t L = H.size() + 1;
    std::vector<double> P(L + 1, 0.0);
    for (std::size_t i = 0; i < H.size(); ++i) {
      P[i] += A * H[i];
      P[i + 1] += B * H[i];
      P[i + 2] += H[i];
    }
    std::vector<double> next(P.size() - 1);
    for (std::size_t i = 0; i + 1 < P.size(); ++i) next[i] = -(static_cast<double>(i + 1)) * P[i + 1];
    G = std::move(next);
    values.push_back(G[0]);
  }
  return values;
}

std::vector<double> G_values(std::span<const double> g, double t0, int count) {
  if (count < 1) return {};
  if (g.size() < static_cast<std::size_t>(std::max(2 * count - 1, 1))) {
    throw std::domain_error("G_values: needs g_0..g_{2(count-1)}");
  }
  std::vector<double> values;
  values.reserve(count);
  values.push_back(g[0]);
  if (count >= 2) {
    values.push_back(-(1.0 + 2.0 * t0) * g[1] - t0 * (t0 + 1.0) * g[2]);
  }
  if (count >= 3) {
    values.push_back(2.0 * (1.0 + 2.0 * t0) * g[1] +
                     (2.0 + 11.0 * t0 + 11.0 * t0 * t0) * g[2] +
                     5.0 * t0 * (t0 + 1.0) * (1.0 + 2.0 * t0) * g[3] +
                     3.0 * t0 * t0 * (t0 + 1.0) * (t0 + 1.0) * g[4]);
  }
  if (count >= 4) {
    const auto scheme = G_values_scheme(g, t0, count);
    for (int k = 3; k < count; ++k) values.push_back(scheme[k]);
  }
  return values;
}

CoeffSet make_coeff_set(const PhaseGeometry& geom, const SaddleData& sd, int terms) {
  if (terms < 1 || terms > kMaxTerms) {
    throw std::domain_error("make_coeff_set: terms must be in 1.." + std::to_string(kMaxTerms));
  }
  CoeffSet cs{};
  cs.order = terms;
  const int K = 2 * terms + 2;
  cs.z_coeffs = z_coefficients(geom, sd, K);
  cs.near_transition = near_transition(sd);
  const int L = K - 2;
  if (!cs.near_transition) {
    cs.f_coeffs = f_coefficients(sd, cs.z_coeffs, L);
  }
  cs.g_coeffs = g_coefficients(sd, cs.z_coeffs, L);
  cs.G_values = G_values(cs.g_coeffs, sd.t0, terms + 1);  // one extra for the error term
  return cs;
}

int default_term_count(long n) { return n <= 10000 ? 4 : 2; }

namespace {

struct AsymptoticParts {
  double ibeta_s;    // I_x(m, nu+1), x = tau/(1+tau)
  double ibeta_t;    // I_{1-x}(nu+1, m)
  double remainder;  // R'
  double error;      // first omitted term of R'
  bool near;
};

AsymptoticParts asymptotic_parts(const Params& params, int terms) {
  params.validate();
  if (params.n < kAsymptoticFloor) {
    throw std::domain_error("s_prime_asymptotic: requires n >= " +
                            std::to_string(kAsymptoticFloor));
  }
  if (params.m < 2 || params.m > params.n - 1) {
    throw std::domain_error(
        "s_prime_asymptotic: requires 2 <= m <= n-1 (use the recursion for the edges)");
  }
  const long n = params.n - 1;  // shifted indices
  const long m = params.m - 1;
  const long nu = n - m;
  const PhaseGeometry geom(n, m);
  const SaddleData sd = geom.saddle_data(params.theta);
  const CoeffSet cs = make_coeff_set(geom, sd, terms);

  const double x = sd.tau / (1.0 + sd.tau);
  const double xc = 1.0 / (1.0 + sd.tau);
  const double dm = static_cast<double>(m);
  const double dnu = static_cast<double>(nu);

  const double log_binom = log_gamma(static_cast<double>(n) + 1.0) - log_gamma(dm) -
                           log_gamma(static_cast<double>(n - m) + 2.0);
  const double prefactor = std::exp(log_binom - sd.chi_at_tau);
  double series = 0.0;
  double nu_pow = 1.0;
  for (int k = 0; k < terms; ++k) {
    series += cs.G_values[k] / nu_pow;
    nu_pow *= dnu;
  }
  AsymptoticParts parts{};
  parts.remainder = prefactor * series;
  parts.error = prefactor * std::fabs(cs.G_values[terms]) / nu_pow;
  parts.ibeta_s = inc_beta(x, dm, dnu + 1.0);
  parts.ibeta_t = inc_beta(xc, dnu + 1.0, dm);
  parts.near = cs.near_transition;
  return parts;
}

}  // namespace

EvalResult s_prime_asymptotic(const Params& params, int terms) {
  const AsymptoticParts parts = asymptotic_parts(params, terms);
  EvalResult r{};
  r.method = Method::asymptotic;
  r.error_estimate = parts.error;
  const double s_route = parts.ibeta_s + parts.remainder;
  if (s_route <= 0.5) {
    r.primary_branch = Branch::S;
    r.s_prime = std::clamp(s_route, 0.0, 1.0);
    r.t_prime = 1.0 - r.s_prime;
  } else {
    r.primary_branch = Branch::T;
    r.t_prime = std::clamp(parts.ibeta_t - parts.remainder, 0.0, 1.0);
    r.s_prime = 1.0 - r.t_prime;
  }
  return r;
}

BranchPair s_prime_asymptotic_branches(const Params& params, int terms) {
  const AsymptoticParts parts = asymptotic_parts(params, terms);
  return {parts.ibeta_s + parts.remainder, parts.ibeta_t - parts.remainder};
}

}  // namespace stircdf

#include "stircdf/dispatch.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "stircdf/asymptotic_series.hpp"
#include "stircdf/rational.hpp"

namespace stircdf {

long recursion_cap() {
  if (const char* env = std::getenv("STIRLING_CDF_RECURSION_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 2) return v;
    throw std::invalid_argument("STIRLING_CDF_RECURSION_CAP: not a valid cap: " +
                                std::string(env));
  }
  return kDefaultRecursionCap;
}

namespace {

EvalResult evaluate_bruteforce(long n, long m, const Rational& theta, std::string* exact) {
  const Rational s = s_prime_bruteforce(n, m, theta);
  if (exact != nullptr) *exact = s.get_str();
  const Rational t = Rational(1) - s;
  EvalResult r{};
  r.s_prime = s.get_d();
  r.t_prime = t.get_d();
  r.primary_branch = s <= t ? Branch::S : Branch::T;
  r.method = Method::bruteforce;
  r.error_estimate = 0.0;
  return r;
}

}  // namespace

EvalResult evaluate(const Params& params, RequestedMethod method, int terms) {
  params.validate();
  const long cap = recursion_cap();
  switch (method) {
    case RequestedMethod::recurrence:
      return s_prime_recursive(params, cap);
    case RequestedMethod::asymptotic:
      return s_prime_asymptotic(params, terms > 0 ? terms : default_term_count(params.n));
    case RequestedMethod::bruteforce:
      return evaluate_bruteforce(params.n, params.m, Rational(params.theta), nullptr);
    case RequestedMethod::automatic:
      break;
  }
  if (params.m <= 1 || params.m == params.n || params.n <= cap) {
    return s_prime_recursive(params, cap);
  }
  return s_prime_asymptotic(params, terms > 0 ? terms : default_term_count(params.n));
}

EvalResult evaluate_with_rational_theta(long n, long m, const std::string& theta_text,
                                        RequestedMethod method, int terms,
                                        std::string* exact) {
  if (method == RequestedMethod::bruteforce) {
    const Rational theta = rational_from_string(theta_text);
    if (sgn(theta) <= 0) throw std::domain_error("theta must be > 0");
    Params{n, m, theta.get_d()}.validate();
    return evaluate_bruteforce(n, m, theta, exact);
  }
  const double theta = rational_from_string(theta_text).get_d();
  return evaluate(Params{n, m, theta}, method, terms);
}

}  // namespace stircdf

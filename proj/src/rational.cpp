#include "stircdf/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace stircdf {

namespace {

// Row n of the unsigned Stirling numbers of the first kind:
// c(n,k) = (-1)^(n-k) S_n^(k), with c(n+1,k) = c(n,k-1) + n c(n,k).
std::vector<mpz_class> stirling_row(long n) {
  std::vector<mpz_class> row{1};  // c(0,0) = 1
  for (long r = 0; r < n; ++r) {
    std::vector<mpz_class> next(r + 2);
    next[0] = 0;
    for (long k = 1; k <= r; ++k) next[k] = row[k - 1] + r * row[k];
    next[r + 1] = row[r];  // top of the triangle stays 1
    row = std::move(next);
  }
  return row;
}

void check_bruteforce_args(long n, long m, const Rational& theta) {
  if (n < 0 || m < 0 || m > n) {
    throw std::domain_error("bruteforce oracle: requires 0 <= m <= n");
  }
  if (n > 60) {
    throw std::domain_error("bruteforce oracle: n > 60 exceeds the oracle cap");
  }
  if (sgn(theta) <= 0) {
    throw std::domain_error("bruteforce oracle: requires theta > 0");
  }
}

}  // namespace

Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("rational_from_string: empty input");
  const auto slash = text.find('/');
  const auto dot = text.find('.');
  try {
    if (slash != std::string::npos) {
      Rational q(text);
      if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
      q.canonicalize();
      return q;
    }
    if (dot != std::string::npos) {
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const std::size_t frac_len = text.size() - dot - 1;
      if (digits.empty() || frac_len == 0) throw std::invalid_argument("bad decimal");
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i])) &&
            !(i == 0 && (digits[i] == '-' || digits[i] == '+'))) {
          throw std::invalid_argument("bad decimal");
        }
      }
      mpz_class num(digits, 10);
      mpz_class den = 1;
      for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    Rational q(mpz_class(text, 10), mpz_class(1));
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("rational_from_string: cannot parse '" + text + "'");
  }
}

Rational s_prime_bruteforce(long n, long m, const Rational& theta) {
  check_bruteforce_args(n, m, theta);
  if (n == 0) return Rational(1);
  const auto c = stirling_row(n);
  const mpz_class a = theta.get_num();
  const mpz_class b = theta.get_den();
  // S' = sum_{k=m}^{n} c(n,k) a^k b^(n-k) / prod_{j=0}^{n-1} (a + j b)
  mpz_class apow;
  mpz_pow_ui(apow.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
  mpz_class bpow;
  mpz_pow_ui(bpow.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(n - m));
  mpz_class num = 0;
  for (long k = m; k <= n; ++k) {
    num += c[k] * apow * bpow;
    apow *= a;
    if (k < n) bpow /= b;
  }
  mpz_class den = 1;
  for (long j = 0; j < n; ++j) den *= a + j * b;
  Rational result(num, den);
  result.canonicalize();
  return result;
}

Rational s_hat_bruteforce(long n, long m, const Rational& theta) {
  check_bruteforce_args(n, m, theta);
  if (n == 0) return Rational(0);
  const auto c = stirling_row(n);
  const mpz_class a = theta.get_num();
  const mpz_class b = theta.get_den();
  // Shat' = sum_{k=max(m,1)}^{n} k c(n,k) a^(k-1) b^(n-k+1) / prod (a + j b)
  const long k0 = std::max(m, 1L);
  mpz_class apow;
  mpz_pow_ui(apow.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(k0 - 1));
  mpz_class bpow;
  mpz_pow_ui(bpow.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(n - k0 + 1));
  mpz_class num = 0;
  for (long k = k0; k <= n; ++k) {
    num += k * c[k] * apow * bpow;
    apow *= a;
    if (k < n) bpow /= b;
  }
  mpz_class den = 1;
  for (long j = 0; j < n; ++j) den *= a + j * b;
  Rational result(num, den);
  result.canonicalize();
  return result;
}

}  // namespace stircdf

#pragma once

#include <gmpxx.h>

#include <string>

namespace stircdf {

// Exact rational arithmetic for the brute-force oracle.
using Rational = mpq_class;

// Parses "a/b", an integer, or a plain decimal ("38.2489082") into an exact
// rational.  Throws std::invalid_argument on malformed input.
Rational rational_from_string(const std::string& text);

// Exact S'_{n,m}(theta) from the unsigned Stirling triangle; n <= 60.
Rational s_prime_bruteforce(long n, long m, const Rational& theta);

// Exact Shat'_{n,m}(theta) = sum_k k S-weighted theta^(k-1) / (theta)_n.
Rational s_hat_bruteforce(long n, long m, const Rational& theta);

}  // namespace stircdf

#pragma once

#include <optional>
#include <string>

#include "stircdf/exact_recurrence.hpp"

namespace stircdf {

enum class RequestedMethod { automatic, recurrence, asymptotic, bruteforce };

// Recursion cap for the automatic method: STIRLING_CDF_RECURSION_CAP when set,
// otherwise kDefaultRecursionCap.
long recursion_cap();

// Evaluates S'_{n,m}(theta) by the requested method; `automatic` picks the
// recursion up to the cap and the asymptotic representation above it (the
// m <= 1 and m == n edges always go through their closed forms).  terms == 0
// means the size-based default.  The bruteforce method re-derives theta as an
// exact rational from the double.
EvalResult evaluate(const Params& params, RequestedMethod method = RequestedMethod::automatic,
                    int terms = 0);

// Same, but with theta supplied as exact-rational text ("7/3", "0.25", "10")
// so the bruteforce oracle sees the intended value.  Returns the exact value
// string through `exact` when the bruteforce path runs.
EvalResult evaluate_with_rational_theta(long n, long m, const std::string& theta_text,
                                        RequestedMethod method, int terms,
                                        std::string* exact);

}  // namespace stircdf

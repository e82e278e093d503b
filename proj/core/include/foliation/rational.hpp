#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace fol {

// Exact rational numbers. mpq_class keeps values canonical (gcd 1,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Parses "n" or "n/d" (optional leading '-'); throws InputError.
Rational parse_rational(std::string_view text);

// Best rational approximation with denominator <= max_den when it matches
// `value` to 1e-12 relative; otherwise the exact binary value.
Rational rationalize(double value, long max_den = 1000000);

} // namespace fol

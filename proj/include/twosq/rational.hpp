#pragma once
#include <gmpxx.h>

#include <string>
#include <string_view>

namespace twosq {

using BigInt = mpz_class;

// Exact fraction, always held in canonical lowest terms with a positive
// denominator. Every inequality the artifact decides (distance to the
// nearest integer against a scaled threshold) is evaluated on these,
// never on floating point.
using Rational = mpq_class;

// Parse "num/den" or a bare integer string. Decimal points and exponents
// are rejected so inputs stay exact. Denominator must be nonzero.
Rational parse_rational(std::string_view text);

// Canonical "num/den" form, e.g. "0/1", "-3/7", "22/7".
std::string rational_str(const Rational& x);

}  // namespace twosq

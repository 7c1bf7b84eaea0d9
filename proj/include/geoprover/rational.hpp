#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace geo {

// Exact arithmetic for every AR table. Nothing floating-point is ever
// converted into one of these.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "3", "-7/4" or "+2". Throws std::invalid_argument on junk.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or just "p" when q == 1.
std::string to_string(const Rational& q);

} // namespace geo

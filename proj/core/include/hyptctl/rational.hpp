#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace hyptctl {

/// Exact arbitrary-precision rational. All core arithmetic goes through
/// this type; there is no floating point anywhere in the library.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "2", "-7", "3/2" or a decimal literal like "1.8" (converted
/// exactly, e.g. 9/5). Returns nullopt on malformed input.
std::optional<Rational> rational_from_string(const std::string& text);

/// Canonical text form: "n" when the denominator is 1, else "n/d".
std::string rational_to_string(const Rational& q);

/// True iff q has denominator 1.
bool is_integral(const Rational& q);

// gmpxx has no long long overloads; route through long (64-bit here).
inline Rational rational_of(long long v) { return Rational(static_cast<long>(v)); }
inline Integer integer_of(long long v) { return Integer(static_cast<long>(v)); }

}  // namespace hyptctl

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace facet {

// Exact rational arithmetic. Every count, frequency, probability and bound in
// the library is carried as a Rational; doubles only appear in printed reports.
using Rational = mpq_class;

// Parses "p/q" or "p" (optional leading '-'). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form, always with an explicit denominator ("3/1").
std::string to_string(const Rational& value);

// Fixed-precision decimal rendering for tables; deterministic for a given value.
std::string to_decimal(const Rational& value, int digits = 6);

double to_double(const Rational& value);

// 2^exponent, exponent may be negative.
Rational pow2(int exponent);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

inline Rational make_rational(long numerator, unsigned long denominator = 1) {
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

// count / total as a canonical rational; total must be positive.
inline Rational ratio(std::size_t count, std::size_t total) {
  Rational r(static_cast<unsigned long>(count), static_cast<unsigned long>(total));
  r.canonicalize();
  return r;
}

}  // namespace facet

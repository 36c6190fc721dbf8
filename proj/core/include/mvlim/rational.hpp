#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvlim {

/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// Parses "a", "-a", "a/b" or a terminating decimal "1.25" exactly.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
bool is_even_integer(const Rational& q);

/// Sign of x^q for x < 0 under the real-root convention: +1 or -1.
/// Even denominators read x^(a/b) as |x|^(a/b); odd denominators keep
/// the sign of x raised to the numerator.
int negative_base_sign(const Rational& q);

/// x^p * x^q == x^(p+q) for every real x where both sides are defined.
bool exponents_add_safely(const Rational& p, const Rational& q);

/// (x^p)^q == x^(p*q) for every real x where both sides are defined.
bool exponents_compose_safely(const Rational& p, const Rational& q);

/// Exact real power c^p under the real-root convention, if rational.
/// Returns nullopt when the result is irrational or undefined (0^p, p < 0).
std::optional<Rational> exact_power(const Rational& c, const Rational& p);

/// Integer power by repeated squaring; exponent may be negative (c != 0).
Rational integer_power(const Rational& c, long n);

mpz_class lcm_of_denominators(const std::vector<Rational>& values);

double to_double(const Rational& q);

}  // namespace mvlim

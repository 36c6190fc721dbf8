#pragma once

#include "mvlim/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

using ExponentMap = std::map<std::string, Rational>;

struct Monomial {
  Rational coefficient;
  ExponentMap exponents;  // zero exponents omitted

  Rational degree() const;
  Rational exponent_of(const std::string& var) const;
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.coefficient == b.coefficient && a.exponents == b.exponents;
  }
};

/// Expands e into monomials with nonnegative rational exponents and rational
/// coefficients, in canonical term order. nullopt when e involves functions,
/// negative powers, powers of sums with non-integer exponent, or a product
/// of rational powers that would not combine under the real-root convention.
std::optional<std::vector<Monomial>> as_polynomial(const Expr& e);

Expr to_expr(const Monomial& m);
Expr to_expr(const std::vector<Monomial>& terms);

/// Largest total degree; 0 for the empty list.
Rational total_degree(const std::vector<Monomial>& terms);

}  // namespace mvlim

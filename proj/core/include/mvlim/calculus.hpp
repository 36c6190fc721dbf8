#pragma once

#include "mvlim/expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace mvlim {

/// Exact symbolic partial derivative. Rational powers with even
/// denominator differentiate as |b|^p, giving p*b^(p-2)*b*b'.
Expr differentiate(const Expr& e, const std::string& var);

/// Sum over j of direction[j] * d e / d vars[j]. Throws std::invalid_argument
/// on a zero direction or a size mismatch.
Expr directional_derivative(const Expr& e, const std::vector<std::string>& vars,
                            const std::vector<Rational>& direction);

/// Simultaneous substitution, canonicalized.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Substitutes x -> x + p_x for every coordinate of p.
Expr translate_to_origin(const Expr& e, const Point& p);

/// False when a negative power or tan/sec in e has a pole at p.
bool defined_at(const Expr& e, const Point& p);

/// Exact value at a rational point, when e is defined there and substitution folds to a constant.
std::optional<Rational> exact_value_at(const Expr& e, const Point& p);

}  // namespace mvlim

#pragma once

#include "mvlim/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mvlim {

enum class Kind { Const, Var, Add, Mul, Pow, Func };

enum class Function { Sin, Cos, Tan, Sec, Exp, Sqrt, Abs };

std::string_view function_name(Function f);
std::optional<Function> function_from_name(std::string_view name);

/// Immutable expression tree over exact rationals.
///
/// Every Expr is built through the canonicalizing constructors below, so two
/// Exprs are structurally equal exactly when compare() returns 0. Canonical
/// form flattens nested sums and products, folds constants, collects like
/// terms and like bases, distributes powers over products and a lone numeric
/// coefficient over a sum, and orders operands by compare(). Negation is a
/// product with coefficient -1 and division is a product with a negative
/// power.
///
/// Rational powers follow the real-root convention: x^(a/b) is
/// sign(x)^a * |x|^(a/b) for odd b and |x|^(a/b) for even b. Rewrites that
/// would change a sign for negative x are not applied.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(const Rational& value);
  static Expr constant(long value) { return constant(Rational(value)); }
  static Expr variable(std::string name);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(const Expr& base, const Rational& exponent);
  static Expr neg(const Expr& e);
  static Expr func(Function f, const Expr& arg);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Const; }
  bool is_zero() const;
  bool is_one() const;

  /// Const value; Pow exponent.
  const Rational& value() const;
  const Rational& exponent() const;
  /// Var name.
  const std::string& name() const;
  Function function() const;
  /// Add terms, Mul factors, {base} for Pow, {arg} for Func.
  const std::vector<Expr>& operands() const;
  const Expr& base() const;
  const Expr& arg() const;

  /// Numeric coefficient of a product (1 for non-products, the value for
  /// constants) and the remaining non-numeric part.
  Rational coefficient() const;
  Expr without_coefficient() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  /// Identity of the shared node; used only as a cheap equality shortcut.
  const void* id() const { return node_.get(); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Total order on canonical expressions; 0 iff structurally equal.
/// Name-lexicographic on bases, then exponent-descending.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr pow(const Expr& base, const Rational& exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr sec(const Expr& e);
Expr exp(const Expr& e);
Expr sqrt(const Expr& e);
Expr abs(const Expr& e);

/// Canonical text in the input grammar; parse(to_string(e)) == e.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

std::set<std::string> free_variables(const Expr& e);

bool contains_variable(const Expr& e, const std::string& name);

/// Coordinates of a point, keyed by variable name.
using Point = std::map<std::string, Rational>;

}  // namespace mvlim

#pragma once

#include "mvlim/evaluate.hpp"
#include "mvlim/expr.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvlim {

struct SeriesTerm {
  Rational exponent;
  Rational coefficient;
};

/// Truncated series in one parameter with ascending rational exponents and
/// rational coefficients: sum of c_k t^(e_k) + O(t^order).
///
/// A series without an order is exact (a finite sum). Intermediate results
/// may carry negative exponents; puiseux_expand() rejects them at the end.
class PuiseuxSeries {
 public:
  explicit PuiseuxSeries(std::string param = "t") : param_(std::move(param)) {}

  static PuiseuxSeries exact(std::vector<SeriesTerm> terms, std::string param = "t");
  /// O(t^order) with no known terms.
  static PuiseuxSeries big_o(const Rational& order, std::string param = "t");

  const std::string& param() const { return param_; }
  const std::vector<SeriesTerm>& terms() const { return terms_; }
  const std::optional<Rational>& order() const { return order_; }
  bool is_exact() const { return !order_.has_value(); }
  /// Exactly zero.
  bool is_zero() const { return terms_.empty() && is_exact(); }
  bool has_leading_term() const { return !terms_.empty(); }
  const SeriesTerm& leading() const { return terms_.front(); }
  /// Lowest exponent that can be nonzero: the first term, or the order when
  /// no term is known. nullopt for the zero series.
  std::optional<Rational> valuation() const;

  /// Drops terms at or above `order` and lowers the truncation order to it.
  PuiseuxSeries truncated(const Rational& order) const;

  /// Sum of the known terms at t > 0.
  template <class T>
  T evaluate(const T& t) const;

  /// "c1*t^(e1) + c2*t^(e2) + O(t^order)".
  std::string to_string() const;

 private:
  friend class SeriesBuilder;
  std::string param_;
  std::vector<SeriesTerm> terms_;
  std::optional<Rational> order_;
};

class SeriesError : public std::runtime_error {
 public:
  enum class Reason {
    NotUnivariate,
    NegativeExponent,
    EssentialSingularity,
    NonRationalCoefficient,
    DomainError,
    OrderUnreachable,
  };
  SeriesError(Reason reason, const std::string& message, std::optional<Rational> achieved = std::nullopt)
      : std::runtime_error(message), reason_(reason), achieved_(std::move(achieved)) {}
  Reason reason() const { return reason_; }
  /// For OrderUnreachable: the truncation order actually reached.
  const std::optional<Rational>& achieved() const { return achieved_; }

 private:
  Reason reason_;
  std::optional<Rational> achieved_;
};

// Series arithmetic. `cap` bounds the exponents that are computed: results
// carry O(t^cap) at most.
PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& cap);
PuiseuxSeries negate(const PuiseuxSeries& a);
PuiseuxSeries scale(const PuiseuxSeries& a, const Rational& c);
PuiseuxSeries multiply(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& cap);
PuiseuxSeries inverse(const PuiseuxSeries& a, const Rational& cap);
/// a^p under the real-root convention for t > 0.
PuiseuxSeries power(const PuiseuxSeries& a, const Rational& p, const Rational& cap);

/// Expands e around param -> 0+ keeping exponents below `cap`. Negative
/// exponents are allowed in the result. Throws SeriesError.
PuiseuxSeries expand_with_cap(const Expr& e, const std::string& param, const Rational& cap);

/// Truncated expansion reaching O(param^order), order > 0. The working cap
/// is doubled up to four times when cancellation eats precision.
/// Throws SeriesError; a negative leading exponent is reported, not hidden.
PuiseuxSeries puiseux_expand(const Expr& e, const std::string& param, const Rational& order);

/// The known terms as an expression in the parameter.
Expr to_expr(const PuiseuxSeries& s);

template <class T>
T PuiseuxSeries::evaluate(const T& t) const {
  using std::pow;
  T sum = T(0);
  for (const auto& term : terms_) {
    sum += ScalarTraits<T>::from_rational(term.coefficient) * pow(t, ScalarTraits<T>::from_rational(term.exponent));
  }
  return sum;
}

}  // namespace mvlim

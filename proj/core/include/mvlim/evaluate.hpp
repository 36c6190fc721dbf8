#pragma once

#include "mvlim/expr.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace mvlim {

/// Conversion hook for scalar types used by evaluate<T>.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double from_rational(const Rational& q) { return q.get_d(); }
};

/// Floating evaluation. nullopt is the undefined marker: division by an
/// exact zero, sqrt of a negative number, tan/sec at a pole, NaN. Infinite
/// values from overflow are returned as is.
///
/// Throws std::invalid_argument when a variable has no assigned value.
template <class T>
std::optional<T> evaluate(const Expr& e, const std::map<std::string, T>& at) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::isnan;
  using std::pow;
  using std::sin;
  using std::sqrt;
  using std::tan;
  std::optional<T> result;
  switch (e.kind()) {
    case Kind::Const: result = ScalarTraits<T>::from_rational(e.value()); break;
    case Kind::Var: {
      auto it = at.find(e.name());
      if (it == at.end()) throw std::invalid_argument("no value for variable '" + e.name() + "'");
      result = it->second;
      break;
    }
    case Kind::Add: {
      T sum = T(0);
      for (const auto& t : e.operands()) {
        auto v = evaluate(t, at);
        if (!v) return std::nullopt;
        sum += *v;
      }
      result = sum;
      break;
    }
    case Kind::Mul: {
      T prod = T(1);
      for (const auto& f : e.operands()) {
        auto v = evaluate(f, at);
        if (!v) return std::nullopt;
        prod *= *v;
      }
      result = prod;
      break;
    }
    case Kind::Pow: {
      auto b = evaluate(e.base(), at);
      if (!b) return std::nullopt;
      const Rational& p = e.exponent();
      if (*b == T(0)) {
        if (p < 0) return std::nullopt;
        result = T(0);
        break;
      }
      T magnitude;
      if (is_integer(p) && p.get_num().fits_slong_p()) {
        long n = p.get_num().get_si();
        T ab = abs(*b);
        magnitude = pow(ab, T(n));
      } else {
        magnitude = pow(abs(*b), ScalarTraits<T>::from_rational(p));
      }
      if (*b < T(0) && negative_base_sign(p) < 0) magnitude = -magnitude;
      result = magnitude;
      break;
    }
    case Kind::Func: {
      auto a = evaluate(e.arg(), at);
      if (!a) return std::nullopt;
      switch (e.function()) {
        case Function::Sin: result = sin(*a); break;
        case Function::Cos: result = cos(*a); break;
        case Function::Tan: {
          T c = cos(*a);
          if (c == T(0)) return std::nullopt;
          result = sin(*a) / c;
          break;
        }
        case Function::Sec: {
          T c = cos(*a);
          if (c == T(0)) return std::nullopt;
          result = T(1) / c;
          break;
        }
        case Function::Exp: result = exp(*a); break;
        case Function::Sqrt:
          if (*a < T(0)) return std::nullopt;
          result = sqrt(*a);
          break;
        case Function::Abs: result = abs(*a); break;
      }
      break;
    }
  }
  if (result && isnan(*result)) return std::nullopt;
  return result;
}

/// Double-precision evaluation at a real assignment.
inline std::optional<double> evaluate(const Expr& e, const std::map<std::string, double>& at) {
  return evaluate<double>(e, at);
}

/// Quotient f/g; undefined when g evaluates to exactly zero.
template <class T>
std::optional<T> evaluate_quotient(const Expr& num, const Expr& den, const std::map<std::string, T>& at) {
  auto d = evaluate<T>(den, at);
  if (!d || *d == T(0)) return std::nullopt;
  auto n = evaluate<T>(num, at);
  if (!n) return std::nullopt;
  return *n / *d;
}

}  // namespace mvlim

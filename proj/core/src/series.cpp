#include "mvlim/series.hpp"

#include <functional>
#include <map>

namespace mvlim {

using TermMap = std::map<Rational, Rational>;

class SeriesBuilder {
 public:
  /// Drops zero coefficients and everything at or above the effective order.
  /// An exact input stays exact unless `cap` actually cuts a term.
  static PuiseuxSeries make(const std::string& param, const TermMap& acc, std::optional<Rational> order,
                            const std::optional<Rational>& cap) {
    if (cap && (!order || *cap < *order)) {
      bool cuts = !!order;
      for (const auto& [e, c] : acc)
        if (c != 0 && e >= *cap) cuts = true;
      if (cuts) order = *cap;
    }
    PuiseuxSeries s(param);
    s.order_ = order;
    for (const auto& [e, c] : acc) {
      if (c == 0) continue;
      if (order && e >= *order) break;
      s.terms_.push_back({e, c});
    }
    return s;
  }
};

namespace {

std::optional<Rational> min_order(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

TermMap to_map(const PuiseuxSeries& s) {
  TermMap m;
  for (const auto& t : s.terms()) m[t.exponent] = t.coefficient;
  return m;
}

PuiseuxSeries constant_series(const Rational& c, const std::string& param) {
  if (c == 0) return PuiseuxSeries(param);
  return PuiseuxSeries::exact({{Rational(0), c}}, param);
}

PuiseuxSeries shift(const PuiseuxSeries& s, const Rational& by) {
  TermMap m;
  for (const auto& t : s.terms()) m[t.exponent + by] = t.coefficient;
  std::optional<Rational> order;
  if (s.order()) order = *s.order() + by;
  return SeriesBuilder::make(s.param(), m, order, std::nullopt);
}

/// r/(c t^v) - 1 for a = c t^v (1 + r).
PuiseuxSeries relative_tail(const PuiseuxSeries& a) {
  const auto& lead = a.leading();
  TermMap m;
  for (size_t i = 1; i < a.terms().size(); ++i)
    m[a.terms()[i].exponent - lead.exponent] = a.terms()[i].coefficient / lead.coefficient;
  std::optional<Rational> order;
  if (a.order()) order = *a.order() - lead.exponent;
  return SeriesBuilder::make(a.param(), m, order, std::nullopt);
}

/// sum_k coeff(k) r^k for r with positive valuation, truncated at relcap.
/// `degree` marks a polynomial (no terms beyond it).
PuiseuxSeries compose_unit(const std::function<Rational(long)>& coeff, std::optional<long> degree,
                           const PuiseuxSeries& r, const Rational& relcap) {
  const std::string& param = r.param();
  PuiseuxSeries result = constant_series(coeff(0), param);
  if (r.is_zero()) return SeriesBuilder::make(param, to_map(result), result.order(), relcap);
  Rational w = *r.valuation();
  if (w <= 0) throw SeriesError(SeriesError::Reason::OrderUnreachable, "series argument does not vanish at 0", w);
  PuiseuxSeries pw = constant_series(Rational(1), param);
  for (long k = 1;; ++k) {
    if (degree && k > *degree) break;
    if (Rational(k) * w >= relcap) {
      result = add(result, PuiseuxSeries::big_o(Rational(k) * w, param), relcap);
      break;
    }
    pw = multiply(pw, r, relcap);
    Rational ak = coeff(k);
    if (ak != 0) result = add(result, scale(pw, ak), relcap);
    if (pw.is_zero()) break;
  }
  return SeriesBuilder::make(param, to_map(result), result.order(), relcap);
}

mpz_class factorial(long k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return f;
}

Rational sin_coeff(long k) {
  if (k % 2 == 0) return 0;
  Rational c(mpz_class(1), factorial(k));
  return ((k / 2) % 2 == 0) ? c : Rational(-c);
}

Rational cos_coeff(long k) {
  if (k % 2 == 1) return 0;
  Rational c(mpz_class(1), factorial(k));
  return ((k / 2) % 2 == 0) ? c : Rational(-c);
}

Rational exp_coeff(long k) { return Rational(mpz_class(1), factorial(k)); }

std::string exponent_label(const Rational& e) { return is_integer(e) ? e.get_str() : "(" + e.get_str() + ")"; }

}  // namespace

// ---------------------------------------------------------------------------

PuiseuxSeries PuiseuxSeries::exact(std::vector<SeriesTerm> terms, std::string param) {
  TermMap m;
  for (auto& t : terms) m[t.exponent] += t.coefficient;
  return SeriesBuilder::make(param, m, std::nullopt, std::nullopt);
}

PuiseuxSeries PuiseuxSeries::big_o(const Rational& order, std::string param) {
  return SeriesBuilder::make(param, {}, order, std::nullopt);
}

std::optional<Rational> PuiseuxSeries::valuation() const {
  if (!terms_.empty()) return terms_.front().exponent;
  return order_;
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational& order) const {
  return SeriesBuilder::make(param_, to_map(*this), order_, order);
}

std::string PuiseuxSeries::to_string() const {
  std::string out;
  for (const auto& t : terms_) {
    Expr term = Expr::constant(t.coefficient) * pow(Expr::variable(param_), t.exponent);
    std::string s = mvlim::to_string(term);
    if (out.empty())
      out = s;
    else if (s.front() == '-')
      out += " - " + s.substr(1);
    else
      out += " + " + s;
  }
  if (order_) {
    std::string big = "O(" + param_ + "^" + exponent_label(*order_) + ")";
    out = out.empty() ? big : out + " + " + big;
  }
  return out.empty() ? "0" : out;
}

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& cap) {
  auto order = min_order(a.order(), b.order());
  TermMap m = to_map(a);
  for (const auto& t : b.terms()) m[t.exponent] += t.coefficient;
  return SeriesBuilder::make(a.param(), m, order, cap);
}

PuiseuxSeries negate(const PuiseuxSeries& a) { return scale(a, Rational(-1)); }

PuiseuxSeries scale(const PuiseuxSeries& a, const Rational& c) {
  if (c == 0) return PuiseuxSeries(a.param());
  TermMap m;
  for (const auto& t : a.terms()) m[t.exponent] = t.coefficient * c;
  return SeriesBuilder::make(a.param(), m, a.order(), std::nullopt);
}

PuiseuxSeries multiply(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& cap) {
  if (a.is_zero() || b.is_zero()) return PuiseuxSeries(a.param());
  Rational va = *a.valuation(), vb = *b.valuation();
  std::optional<Rational> order;
  if (a.order()) order = *a.order() + vb;
  if (b.order()) order = min_order(order, *b.order() + va);
  Rational limit = order ? std::min(*order, cap) : cap;
  TermMap m;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Rational e = ta.exponent + tb.exponent;
      if (e >= limit) break;
      m[e] += ta.coefficient * tb.coefficient;
    }
  }
  bool cut = false;
  if (!order) {
    // Exact product: the cap applies only if it removed something.
    for (const auto& ta : a.terms()) {
      if (ta.exponent + b.terms().back().exponent >= cap) {
        cut = true;
        break;
      }
    }
  }
  if (cut) order = cap;
  return SeriesBuilder::make(a.param(), m, order, cap);
}

PuiseuxSeries inverse(const PuiseuxSeries& a, const Rational& cap) {
  if (a.is_zero()) throw SeriesError(SeriesError::Reason::DomainError, "division by an identically zero series");
  if (!a.has_leading_term())
    throw SeriesError(SeriesError::Reason::OrderUnreachable, "leading term of a divisor was not determined",
                      a.order());
  const auto lead = a.leading();
  PuiseuxSeries r = relative_tail(a);
  auto geometric = [](long k) { return Rational(k % 2 == 0 ? 1 : -1); };
  PuiseuxSeries g = compose_unit(geometric, std::nullopt, r, cap + lead.exponent);
  return scale(shift(g, -lead.exponent), 1 / lead.coefficient);
}

PuiseuxSeries power(const PuiseuxSeries& a, const Rational& p, const Rational& cap) {
  const std::string& param = a.param();
  if (p == 0) return constant_series(Rational(1), param);
  if (p == 1) return a;
  if (a.is_zero()) {
    if (p > 0) return PuiseuxSeries(param);
    throw SeriesError(SeriesError::Reason::DomainError, "negative power of an identically zero series");
  }
  if (is_integer(p) && p > 0 && p <= 64 && a.is_exact()) {
    long n = p.get_num().get_si();
    PuiseuxSeries result = constant_series(Rational(1), param);
    PuiseuxSeries b = a;
    while (n > 0) {
      if (n & 1) result = multiply(result, b, cap);
      n >>= 1;
      if (n) b = multiply(b, b, cap);
    }
    return result;
  }
  if (!a.has_leading_term())
    throw SeriesError(SeriesError::Reason::OrderUnreachable, "leading term of a power base was not determined",
                      a.order());
  const auto lead = a.leading();
  auto cp = exact_power(lead.coefficient, p);
  if (!cp)
    throw SeriesError(SeriesError::Reason::NonRationalCoefficient,
                      "(" + lead.coefficient.get_str() + ")^(" + p.get_str() + ") is not rational");
  PuiseuxSeries r = relative_tail(a);
  Rational shift_by = lead.exponent * p;
  std::optional<long> degree;
  if (is_integer(p) && p > 0) degree = p.get_num().get_si();
  auto binomial = [p](long k) {
    Rational c = 1;
    for (long i = 0; i < k; ++i) c = c * (p - i) / (i + 1);
    return c;
  };
  PuiseuxSeries g = compose_unit(binomial, degree, r, cap - shift_by);
  return scale(shift(g, shift_by), *cp);
}

namespace {

PuiseuxSeries apply_function(Function f, const PuiseuxSeries& s, const Rational& cap) {
  if (f == Function::Sqrt) {
    if (s.is_zero()) return s;
    if (s.has_leading_term() && s.leading().coefficient < 0)
      throw SeriesError(SeriesError::Reason::DomainError, "sqrt of a series that is negative near 0+");
    return power(s, Rational(1, 2), cap);
  }
  if (f == Function::Abs) {
    if (s.is_zero()) return s;
    if (!s.has_leading_term())
      throw SeriesError(SeriesError::Reason::OrderUnreachable, "sign of abs argument not determined", s.order());
    return s.leading().coefficient < 0 ? negate(s) : s;
  }
  if (s.has_leading_term()) {
    if (s.leading().exponent < 0)
      throw SeriesError(SeriesError::Reason::EssentialSingularity,
                        std::string(function_name(f)) + " of a series with negative leading exponent");
    if (s.leading().exponent == 0)
      throw SeriesError(SeriesError::Reason::NonRationalCoefficient,
                        std::string(function_name(f)) + " argument has nonzero constant term " +
                            s.leading().coefficient.get_str());
  } else if (!s.is_zero() && *s.order() <= 0) {
    throw SeriesError(SeriesError::Reason::OrderUnreachable, "function argument not determined near 0", s.order());
  }
  switch (f) {
    case Function::Sin: return compose_unit(sin_coeff, std::nullopt, s, cap);
    case Function::Cos: return compose_unit(cos_coeff, std::nullopt, s, cap);
    case Function::Exp: return compose_unit(exp_coeff, std::nullopt, s, cap);
    case Function::Tan: {
      auto c = compose_unit(cos_coeff, std::nullopt, s, cap);
      return multiply(compose_unit(sin_coeff, std::nullopt, s, cap), inverse(c, cap), cap);
    }
    case Function::Sec: return inverse(compose_unit(cos_coeff, std::nullopt, s, cap), cap);
    default: break;
  }
  return s;
}

}  // namespace

PuiseuxSeries expand_with_cap(const Expr& e, const std::string& param, const Rational& cap) {
  switch (e.kind()) {
    case Kind::Const: return constant_series(e.value(), param);
    case Kind::Var:
      if (e.name() != param)
        throw SeriesError(SeriesError::Reason::NotUnivariate,
                          "variable '" + e.name() + "' is not the series parameter '" + param + "'");
      return PuiseuxSeries::exact({{Rational(1), Rational(1)}}, param);
    case Kind::Add: {
      PuiseuxSeries acc(param);
      for (const auto& t : e.operands()) acc = add(acc, expand_with_cap(t, param, cap), cap);
      return acc;
    }
    case Kind::Mul: {
      PuiseuxSeries acc = constant_series(Rational(1), param);
      for (const auto& f : e.operands()) acc = multiply(acc, expand_with_cap(f, param, cap), cap);
      return acc;
    }
    case Kind::Pow: return power(expand_with_cap(e.base(), param, cap), e.exponent(), cap);
    case Kind::Func: return apply_function(e.function(), expand_with_cap(e.arg(), param, cap), cap);
  }
  return PuiseuxSeries(param);
}

PuiseuxSeries puiseux_expand(const Expr& e, const std::string& param, const Rational& order) {
  if (order <= 0) throw std::invalid_argument("truncation order must be positive");
  Rational cap = order;
  std::optional<Rational> achieved;
  for (int attempt = 0; attempt < 5; ++attempt) {
    PuiseuxSeries s(param);
    try {
      s = expand_with_cap(e, param, cap);
    } catch (const SeriesError& err) {
      // a base or divisor vanished to the working cap: retry deeper
      if (err.reason() != SeriesError::Reason::OrderUnreachable || attempt == 4) throw;
      achieved = err.achieved();
      cap *= 2;
      continue;
    }
    if (s.has_leading_term() && s.leading().exponent < 0)
      throw SeriesError(SeriesError::Reason::NegativeExponent,
                        "leading exponent " + s.leading().exponent.get_str() + " is negative");
    if (s.is_exact() || *s.order() >= order) return s.truncated(order);
    achieved = s.order();
    cap *= 2;
  }
  throw SeriesError(SeriesError::Reason::OrderUnreachable,
                    "cancellation: reached only O(" + param + "^" + achieved->get_str() + ")", achieved);
}

Expr to_expr(const PuiseuxSeries& s) {
  std::vector<Expr> parts;
  for (const auto& t : s.terms())
    parts.push_back(Expr::constant(t.coefficient) * pow(Expr::variable(s.param()), t.exponent));
  return Expr::add(std::move(parts));
}

}  // namespace mvlim

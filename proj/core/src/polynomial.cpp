#include "mvlim/polynomial.hpp"

#include <algorithm>

namespace mvlim {

Rational Monomial::degree() const {
  Rational d = 0;
  for (const auto& [v, e] : exponents) d += e;
  return d;
}

Rational Monomial::exponent_of(const std::string& var) const {
  auto it = exponents.find(var);
  return it == exponents.end() ? Rational(0) : it->second;
}

namespace {

using Poly = std::map<ExponentMap, Rational>;

void add_into(Poly& acc, const ExponentMap& key, const Rational& c) {
  auto& slot = acc[key];
  slot += c;
  if (slot == 0) acc.erase(key);
}

std::optional<Poly> multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      ExponentMap e = ea;
      for (const auto& [v, p] : eb) {
        auto it = e.find(v);
        if (it == e.end()) {
          e[v] = p;
          continue;
        }
        if (!exponents_add_safely(it->second, p)) return std::nullopt;
        it->second += p;
        if (it->second == 0) e.erase(it);
      }
      add_into(out, e, ca * cb);
    }
  }
  return out;
}

std::optional<Poly> expand(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: {
      Poly p;
      if (e.value() != 0) p[{}] = e.value();
      return p;
    }
    case Kind::Var: return Poly{{ExponentMap{{e.name(), Rational(1)}}, Rational(1)}};
    case Kind::Add: {
      Poly acc;
      for (const auto& t : e.operands()) {
        auto p = expand(t);
        if (!p) return std::nullopt;
        for (const auto& [k, c] : *p) add_into(acc, k, c);
      }
      return acc;
    }
    case Kind::Mul: {
      Poly acc{{ExponentMap{}, Rational(1)}};
      for (const auto& f : e.operands()) {
        auto p = expand(f);
        if (!p) return std::nullopt;
        auto prod = multiply(acc, *p);
        if (!prod) return std::nullopt;
        acc = std::move(*prod);
      }
      return acc;
    }
    case Kind::Pow: {
      const Rational& p = e.exponent();
      if (p < 0) return std::nullopt;
      if (e.base().kind() == Kind::Var) return Poly{{ExponentMap{{e.base().name(), p}}, Rational(1)}};
      if (!is_integer(p) || !p.get_num().fits_ulong_p()) return std::nullopt;
      auto b = expand(e.base());
      if (!b) return std::nullopt;
      Poly acc{{ExponentMap{}, Rational(1)}};
      for (unsigned long k = p.get_num().get_ui(); k > 0; --k) {
        auto prod = multiply(acc, *b);
        if (!prod) return std::nullopt;
        acc = std::move(*prod);
      }
      return acc;
    }
    case Kind::Func: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Expr to_expr(const Monomial& m) {
  std::vector<Expr> factors{Expr::constant(m.coefficient)};
  for (const auto& [v, p] : m.exponents) factors.push_back(Expr::pow(Expr::variable(v), p));
  return Expr::mul(std::move(factors));
}

Expr to_expr(const std::vector<Monomial>& terms) {
  std::vector<Expr> parts;
  for (const auto& m : terms) parts.push_back(to_expr(m));
  return Expr::add(std::move(parts));
}

std::optional<std::vector<Monomial>> as_polynomial(const Expr& e) {
  auto p = expand(e);
  if (!p) return std::nullopt;
  std::vector<Monomial> out;
  for (const auto& [k, c] : *p) out.push_back({c, k});
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    Monomial ua{Rational(1), a.exponents}, ub{Rational(1), b.exponents};
    return compare(to_expr(ua), to_expr(ub)) < 0;
  });
  return out;
}

Rational total_degree(const std::vector<Monomial>& terms) {
  Rational d = 0;
  for (const auto& m : terms) d = std::max(d, m.degree());
  return d;
}

}  // namespace mvlim

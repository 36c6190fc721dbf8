#include "mvlim/calculus.hpp"

#include "mvlim/evaluate.hpp"

#include <cmath>
#include <stdexcept>

namespace mvlim {

Expr differentiate(const Expr& e, const std::string& var) {
  if (!contains_variable(e, var)) return Expr();
  switch (e.kind()) {
    case Kind::Const: return Expr();
    case Kind::Var: return Expr::constant(1);
    case Kind::Add: {
      std::vector<Expr> parts;
      for (const auto& t : e.operands()) parts.push_back(differentiate(t, var));
      return Expr::add(std::move(parts));
    }
    case Kind::Mul: {
      const auto& fs = e.operands();
      std::vector<Expr> parts;
      for (size_t i = 0; i < fs.size(); ++i) {
        Expr d = differentiate(fs[i], var);
        if (d.is_zero()) continue;
        std::vector<Expr> term(fs.begin(), fs.end());
        term[i] = d;
        parts.push_back(Expr::mul(std::move(term)));
      }
      return Expr::add(std::move(parts));
    }
    case Kind::Pow: {
      const Expr& b = e.base();
      const Rational& p = e.exponent();
      Expr db = differentiate(b, var);
      if (mpz_even_p(p.get_den_mpz_t())) {
        // d/dx |b|^p = p |b|^(p-2) b b'
        return Expr::mul({Expr::constant(p), Expr::pow(b, p - 2), b, db});
      }
      return Expr::mul({Expr::constant(p), Expr::pow(b, p - 1), db});
    }
    case Kind::Func: {
      const Expr& u = e.arg();
      Expr du = differentiate(u, var);
      Expr outer;
      switch (e.function()) {
        case Function::Sin: outer = cos(u); break;
        case Function::Cos: outer = -sin(u); break;
        case Function::Tan: outer = pow(sec(u), Rational(2)); break;
        case Function::Sec: outer = sec(u) * tan(u); break;
        case Function::Exp: outer = e; break;
        case Function::Sqrt: outer = Expr::constant(Rational(1, 2)) / sqrt(u); break;
        case Function::Abs: outer = u / abs(u); break;
      }
      return outer * du;
    }
  }
  return Expr();
}

Expr directional_derivative(const Expr& e, const std::vector<std::string>& vars,
                            const std::vector<Rational>& direction) {
  if (vars.size() != direction.size()) throw std::invalid_argument("direction has wrong dimension");
  bool nonzero = false;
  for (const auto& c : direction) nonzero = nonzero || c != 0;
  if (!nonzero) throw std::invalid_argument("zero direction vector");
  std::vector<Expr> parts;
  for (size_t j = 0; j < vars.size(); ++j) {
    if (direction[j] == 0) continue;
    parts.push_back(Expr::constant(direction[j]) * differentiate(e, vars[j]));
  }
  return Expr::add(std::move(parts));
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e.kind()) {
    case Kind::Const: return e;
    case Kind::Var: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    case Kind::Add: {
      std::vector<Expr> parts;
      for (const auto& t : e.operands()) parts.push_back(substitute(t, bindings));
      return Expr::add(std::move(parts));
    }
    case Kind::Mul: {
      std::vector<Expr> parts;
      for (const auto& f : e.operands()) parts.push_back(substitute(f, bindings));
      return Expr::mul(std::move(parts));
    }
    case Kind::Pow: return Expr::pow(substitute(e.base(), bindings), e.exponent());
    case Kind::Func: return Expr::func(e.function(), substitute(e.arg(), bindings));
  }
  return e;
}

Expr translate_to_origin(const Expr& e, const Point& p) {
  std::map<std::string, Expr> shift;
  for (const auto& [v, c] : p)
    if (c != 0) shift[v] = Expr::variable(v) + Expr::constant(c);
  if (shift.empty()) return e;
  return substitute(e, shift);
}

namespace {

std::optional<Rational> folded_value(const Expr& e, const Point& p) {
  std::map<std::string, Expr> b;
  for (const auto& [v, c] : p) b[v] = Expr::constant(c);
  Expr r = substitute(e, b);
  if (r.kind() == Kind::Const) return r.value();
  return std::nullopt;
}

// nonzero or unknown-but-clearly-away-from-zero
bool clearly_nonzero(const Expr& e, const Point& p) {
  if (auto v = folded_value(e, p)) return *v != 0;
  std::map<std::string, double> at;
  for (const auto& [v, c] : p) at[v] = c.get_d();
  auto d = evaluate(e, at);
  return d && std::isfinite(*d) && std::abs(*d) > 1e-12;
}

}  // namespace

bool defined_at(const Expr& e, const Point& p) {
  switch (e.kind()) {
    case Kind::Pow:
      if (e.exponent() < 0 && !clearly_nonzero(e.base(), p)) return false;
      return defined_at(e.base(), p);
    case Kind::Func:
      if ((e.function() == Function::Tan || e.function() == Function::Sec) &&
          !clearly_nonzero(Expr::func(Function::Cos, e.arg()), p))
        return false;
      return defined_at(e.arg(), p);
    default:
      for (const auto& o : e.operands())
        if (!defined_at(o, p)) return false;
      return true;
  }
}

std::optional<Rational> exact_value_at(const Expr& e, const Point& p) {
  if (!defined_at(e, p)) return std::nullopt;
  return folded_value(e, p);
}

}  // namespace mvlim

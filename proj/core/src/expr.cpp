#include "mvlim/expr.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace mvlim {

struct Expr::Node {
  Kind kind = Kind::Const;
  Rational value;  // Const value or Pow exponent
  std::string name;
  Function fn = Function::Sin;
  std::vector<Expr> ops;
};

namespace {

constexpr std::string_view kFunctionNames[] = {"sin", "cos", "tan", "sec", "exp", "sqrt", "abs"};

}  // namespace

std::string_view function_name(Function f) { return kFunctionNames[static_cast<int>(f)]; }

std::optional<Function> function_from_name(std::string_view name) {
  for (int i = 0; i < 7; ++i)
    if (kFunctionNames[i] == name) return static_cast<Function>(i);
  return std::nullopt;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() {
  static const auto zero = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = 0;
    return std::shared_ptr<const Node>(n);
  }();
  node_ = zero;
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Const && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Const && node_->value == 1; }

const Rational& Expr::value() const {
  if (node_->kind != Kind::Const) throw std::logic_error("value() on non-constant");
  return node_->value;
}
const Rational& Expr::exponent() const {
  if (node_->kind != Kind::Pow) throw std::logic_error("exponent() on non-power");
  return node_->value;
}
const std::string& Expr::name() const {
  if (node_->kind != Kind::Var) throw std::logic_error("name() on non-variable");
  return node_->name;
}
Function Expr::function() const {
  if (node_->kind != Kind::Func) throw std::logic_error("function() on non-function");
  return node_->fn;
}
const std::vector<Expr>& Expr::operands() const { return node_->ops; }
const Expr& Expr::base() const {
  if (node_->kind != Kind::Pow) throw std::logic_error("base() on non-power");
  return node_->ops[0];
}
const Expr& Expr::arg() const {
  if (node_->kind != Kind::Func) throw std::logic_error("arg() on non-function");
  return node_->ops[0];
}

Rational Expr::coefficient() const {
  if (kind() == Kind::Const) return value();
  if (kind() == Kind::Mul && operands().front().kind() == Kind::Const) return operands().front().value();
  return Rational(1);
}

Expr Expr::without_coefficient() const {
  if (kind() == Kind::Const) return constant(1);
  if (kind() == Kind::Mul && operands().front().kind() == Kind::Const) {
    std::vector<Expr> rest(operands().begin() + 1, operands().end());
    if (rest.size() == 1) return rest.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->ops = std::move(rest);
    return Expr(n);
  }
  return *this;
}

// ---------------------------------------------------------------------------
// Ordering

namespace {

int cmp_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int atom_rank(Kind k) {
  switch (k) {
    case Kind::Const: return 0;
    case Kind::Var: return 1;
    case Kind::Func: return 2;
    case Kind::Add: return 3;
    case Kind::Pow: return 4;
    case Kind::Mul: return 5;
  }
  return 6;
}

struct FactorRef {
  const Expr* base;
  const Rational* exponent;
};

const Rational kOne(1);

void factor_view(const Expr& e, Rational& coeff, std::vector<FactorRef>& out) {
  coeff = 1;
  auto push = [&](const Expr& f) {
    if (f.kind() == Kind::Pow)
      out.push_back({&f.base(), &f.exponent()});
    else
      out.push_back({&f, &kOne});
  };
  switch (e.kind()) {
    case Kind::Const: coeff = e.value(); break;
    case Kind::Mul:
      for (const auto& f : e.operands()) {
        if (f.kind() == Kind::Const)
          coeff = f.value();
        else
          push(f);
      }
      break;
    default: push(e); break;
  }
}

int compare_atom(const Expr& a, const Expr& b);

int compare_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = compare(a[i], b[i])) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare_atom(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  int ra = atom_rank(a.kind()), rb = atom_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const: return cmp_rational(a.value(), b.value());
    case Kind::Var: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Func:
      if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
      return compare(a.arg(), b.arg());
    case Kind::Pow:
      if (int c = compare(a.base(), b.base())) return c;
      return -cmp_rational(a.exponent(), b.exponent());
    case Kind::Add:
    case Kind::Mul: return compare_lists(a.operands(), b.operands());
  }
  return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  Rational ca, cb;
  std::vector<FactorRef> fa, fb;
  factor_view(a, ca, fa);
  factor_view(b, cb, fb);
  size_t n = std::min(fa.size(), fb.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = compare_atom(*fa[i].base, *fb[i].base)) return c;
    if (int c = cmp_rational(*fa[i].exponent, *fb[i].exponent)) return -c;
  }
  if (fa.size() != fb.size()) return fa.size() < fb.size() ? -1 : 1;
  return cmp_rational(ca, cb);
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Canonicalizing constructors

Expr Expr::constant(const Rational& value) {
  if (value == 0) return Expr();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = value;
  n->value.canonicalize();
  return Expr(n);
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Expr(n);
}

namespace {

Expr scale(const Rational& c, const Expr& rest) {
  if (c == 0) return Expr();
  if (c == 1) return rest;
  return Expr::mul({Expr::constant(c), rest});
}

void flatten_into(const Expr& e, Kind k, std::vector<Expr>& out) {
  if (e.kind() == k)
    for (const auto& op : e.operands()) flatten_into(op, k, out);
  else
    out.push_back(e);
}

}  // namespace

Expr Expr::add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (const auto& t : terms) flatten_into(t, Kind::Add, flat);

  Rational constant_part = 0;
  std::map<Expr, Rational, ExprLess> collected;
  for (const auto& t : flat) {
    if (t.kind() == Kind::Const) {
      constant_part += t.value();
      continue;
    }
    collected[t.without_coefficient()] += t.coefficient();
  }
  std::vector<Expr> out;
  if (constant_part != 0) out.push_back(constant(constant_part));
  for (const auto& [rest, c] : collected)
    if (c != 0) out.push_back(scale(c, rest));
  if (out.empty()) return Expr();
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), ExprLess{});
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->ops = std::move(out);
  return Expr(n);
}

Expr Expr::mul(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  for (const auto& f : factors) flatten_into(f, Kind::Mul, flat);

  Rational coeff = 1;
  std::map<Expr, std::vector<Rational>, ExprLess> by_base;
  for (const auto& f : flat) {
    if (f.kind() == Kind::Const) {
      coeff *= f.value();
      continue;
    }
    if (f.kind() == Kind::Pow)
      by_base[f.base()].push_back(f.exponent());
    else
      by_base[f].push_back(Rational(1));
  }
  if (coeff == 0) return Expr();

  std::vector<Expr> out;
  auto emit = [&](const Expr& base, const Rational& e) {
    if (e == 0) return;
    Expr f = Expr::pow(base, e);
    if (f.kind() == Kind::Const)
      coeff *= f.value();
    else if (f.kind() == Kind::Mul)
      for (const auto& g : f.operands()) {
        if (g.kind() == Kind::Const)
          coeff *= g.value();
        else
          out.push_back(g);
      }
    else
      out.push_back(f);
  };
  for (auto& [base, exps] : by_base) {
    std::sort(exps.begin(), exps.end(), [](const Rational& a, const Rational& b) { return a > b; });
    bool positive_base = base.kind() == Kind::Const && base.value() > 0;
    Rational acc = exps.front();
    for (size_t i = 1; i < exps.size(); ++i) {
      if (positive_base || exponents_add_safely(acc, exps[i])) {
        acc += exps[i];
      } else {
        emit(base, acc);
        acc = exps[i];
      }
    }
    emit(base, acc);
  }
  if (coeff == 0) return Expr();
  if (out.empty()) return constant(coeff);
  std::sort(out.begin(), out.end(), ExprLess{});
  if (out.size() == 1) {
    if (coeff == 1) return out.front();
    if (out.front().kind() == Kind::Add) {
      std::vector<Expr> terms;
      for (const auto& t : out.front().operands()) terms.push_back(scale(coeff * t.coefficient(), t.without_coefficient()));
      return add(std::move(terms));
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  if (coeff != 1) n->ops.push_back(constant(coeff));
  for (auto& f : out) n->ops.push_back(std::move(f));
  return Expr(n);
}

Expr Expr::pow(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return constant(1);
  if (exponent == 1) return base;
  switch (base.kind()) {
    case Kind::Const:
      if (auto v = exact_power(base.value(), exponent)) return constant(*v);
      break;
    case Kind::Pow:
      if (exponents_compose_safely(base.exponent(), exponent)) return pow(base.base(), base.exponent() * exponent);
      break;
    case Kind::Mul: {
      std::vector<Expr> parts;
      for (const auto& f : base.operands()) parts.push_back(pow(f, exponent));
      return mul(std::move(parts));
    }
    default: break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->value = exponent;
  n->value.canonicalize();
  n->ops = {base};
  return Expr(n);
}

Expr Expr::neg(const Expr& e) { return mul({constant(-1), e}); }

Expr Expr::func(Function f, const Expr& arg) {
  if (arg.kind() == Kind::Const) {
    const Rational& c = arg.value();
    switch (f) {
      case Function::Sin:
      case Function::Tan:
        if (c == 0) return Expr();
        break;
      case Function::Cos:
      case Function::Sec:
      case Function::Exp:
        if (c == 0) return constant(1);
        break;
      case Function::Sqrt:
        if (c >= 0)
          if (auto v = exact_power(c, Rational(1, 2))) return constant(*v);
        break;
      case Function::Abs: return constant(abs(c));
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Func;
  n->fn = f;
  n->ops = {arg};
  return Expr(n);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, Expr::neg(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::mul({a, Expr::pow(b, Rational(-1))}); }
Expr operator-(const Expr& a) { return Expr::neg(a); }

Expr pow(const Expr& base, const Rational& exponent) { return Expr::pow(base, exponent); }
Expr sin(const Expr& e) { return Expr::func(Function::Sin, e); }
Expr cos(const Expr& e) { return Expr::func(Function::Cos, e); }
Expr tan(const Expr& e) { return Expr::func(Function::Tan, e); }
Expr sec(const Expr& e) { return Expr::func(Function::Sec, e); }
Expr exp(const Expr& e) { return Expr::func(Function::Exp, e); }
Expr sqrt(const Expr& e) { return Expr::func(Function::Sqrt, e); }
Expr abs(const Expr& e) { return Expr::func(Function::Abs, e); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string exponent_text(const Rational& p) {
  if (is_integer(p)) return p.get_str();
  return "(" + p.get_str() + ")";
}

std::string power_text(const Expr& base, const Rational& p);

std::string factor_text(const Expr& f) {
  switch (f.kind()) {
    case Kind::Add: return "(" + to_string(f) + ")";
    case Kind::Pow: return power_text(f.base(), f.exponent());
    default: return to_string(f);
  }
}

std::string power_text(const Expr& base, const Rational& p) {
  std::string b;
  bool bare = base.kind() == Kind::Var || base.kind() == Kind::Func ||
              (base.kind() == Kind::Const && is_integer(base.value()) && base.value() >= 0);
  b = bare ? to_string(base) : "(" + to_string(base) + ")";
  if (p == 1) return b;
  return b + "^" + exponent_text(p);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string product_text(const Expr& e) {
  Rational c = e.coefficient();
  std::vector<Expr> factors;
  if (e.kind() == Kind::Mul) {
    for (const auto& f : e.operands())
      if (f.kind() != Kind::Const) factors.push_back(f);
  } else {
    factors.push_back(e);
  }
  std::vector<std::string> num, den;
  mpz_class a = abs(c.get_num());
  if (a != 1) num.push_back(a.get_str());
  bool sum_below = false;
  for (const auto& f : factors) {
    if (f.kind() == Kind::Pow && f.exponent() < 0) {
      den.push_back(power_text(f.base(), -f.exponent()));
      sum_below = sum_below || f.base().kind() == Kind::Add;
    } else {
      num.push_back(factor_text(f));
    }
  }
  std::string out = c < 0 ? "-" : "";
  out += num.empty() ? "1" : join(num, "*");
  // "3*(a + b)" would reparse with the 3 distributed, so divide separately
  if (c.get_den() != 1) {
    if (sum_below) out += "/" + c.get_den().get_str();
    else den.insert(den.begin(), c.get_den().get_str());
  }
  if (!den.empty()) out += "/" + (den.size() == 1 ? den.front() : "(" + join(den, "*") + ")");
  return out;
}

}  // namespace

std::string to_string(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: return e.value().get_str();
    case Kind::Var: return e.name();
    case Kind::Func: return std::string(function_name(e.function())) + "(" + to_string(e.arg()) + ")";
    case Kind::Pow:
      if (e.exponent() < 0) return product_text(e);
      return power_text(e.base(), e.exponent());
    case Kind::Mul: return product_text(e);
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const auto& t : e.operands()) {
        if (first) {
          out = to_string(t);
          first = false;
        } else if (t.coefficient() < 0) {
          out += " - " + to_string(Expr::neg(t));
        } else {
          out += " + " + to_string(t);
        }
      }
      return out;
    }
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Var) {
    out.insert(e.name());
    return;
  }
  for (const auto& op : e.operands()) collect_vars(op, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool contains_variable(const Expr& e, const std::string& name) {
  if (e.kind() == Kind::Var) return e.name() == name;
  for (const auto& op : e.operands())
    if (contains_variable(op, name)) return true;
  return false;
}

}  // namespace mvlim

#include "support.hpp"

#include "mvlim/evaluate.hpp"
#include "mvlim/hifloat.hpp"
#include "mvlim/parser.hpp"

#include <cmath>
#include <algorithm>

namespace mvlim::testing {

const std::vector<Golden>& goldens() {
  using K = Verdict::Kind;
  static const std::vector<Golden> list = {
      {"sine difference", "x - y", "sin(x) - sin(y)", {"x", "y"}, K::Exists, Rational(1), {}, {}, {}},
      {"tangent difference", "sin(z) - sin(x^2+y^2)", "tan(z - x^2) - tan(y^2)", {"x", "y", "z"}, K::Exists,
       Rational(1), {}, {}, {}},
      {"cosine difference", "x^2 - y^2", "cos(x) - cos(y)", {"x", "y"}, K::Exists, Rational(-2), {}, {}, {}},
      {"separation", "x^2 + sin(y)^4", "sin(x)^2 + y^4", {"x", "y"}, K::Exists, Rational(1), {}, {}, {}},
      {"lines disagree", "x*y", "x^2 + y^2", {"x", "y"}, K::DoesNotExist, std::nullopt, {}, {}, {}},
      {"parabola disagrees", "x^2*y", "x^4 + y^2", {"x", "y"}, K::DoesNotExist, std::nullopt, {}, {}, {}},
      {"polar bound", "x^3*y^3", "x^6 + y^4", {"x", "y"}, K::Exists, Rational(0), {}, {}, {}},
      {"dominant squares", "x^3*y^2", "x^6 + x^2*y^2 + y^6", {"x", "y"}, K::Exists, Rational(0), {}, {}, {}},
      {"taylor replacement", "2 - 2*cos(x^2*y^2)", "x^10 + x^6*y^2 + y^6 - x^9*sin(y)", {"x", "y"}, K::Exists,
       Rational(0), {}, {}, {}},
      {"thread curve", "7*x^2*y*z^5 + x*y^3 - 3*x^4*y*z", "x^8 + x^2*y^2*z^4 + (y - x^3 + z^2)^2 + z^6 - x*y^3*z^5",
       {"x", "y", "z"}, K::DoesNotExist, std::nullopt, {"x^4", "x*y*z^2", "y - x^3 + z^2", "z^3"}, {1},
       {Rational(1), Rational(1), Rational(1)}},
  };
  return list;
}

LimitProblem problem_of(const Golden& g) {
  LimitProblem p{parse(g.numerator), parse(g.denominator), g.vars, {}};
  for (const auto& v : g.vars) p.point[v] = Rational(0);
  return p;
}

ResolveOptions options_of(const Golden& g, const LimitProblem& p) {
  ResolveOptions o;
  if (!g.hint_u.empty()) {
    std::vector<Expr> u;
    for (const auto& s : g.hint_u) u.push_back(parse(s));
    SquareDecomposition dec = make_decomposition(p.denominator, u);
    dec.drop = g.hint_drop;
    dec.m = g.hint_m;
    o.hints.push_back(dec);
  }
  return o;
}

namespace {

double eval_function(Function f, double a, bool& ok) {
  switch (f) {
    case Function::Sin: return std::sin(a);
    case Function::Cos: return std::cos(a);
    case Function::Tan: {
      double c = std::cos(a);
      if (c == 0) ok = false;
      return std::sin(a) / c;
    }
    case Function::Sec: {
      double c = std::cos(a);
      if (c == 0) ok = false;
      return 1 / c;
    }
    case Function::Exp: return std::exp(a);
    case Function::Sqrt:
      if (a < 0) ok = false;
      return std::sqrt(a);
    case Function::Abs: return std::fabs(a);
  }
  ok = false;
  return 0;
}

std::shared_ptr<RawExpr> node(RawExpr::Op op, std::vector<std::shared_ptr<RawExpr>> kids = {}) {
  auto n = std::make_shared<RawExpr>();
  n->op = op;
  n->kids = std::move(kids);
  return n;
}

std::shared_ptr<RawExpr> constant(const Rational& q) {
  auto n = node(RawExpr::Op::Const);
  n->value = q;
  return n;
}

std::shared_ptr<RawExpr> variable(const std::string& name) {
  auto n = node(RawExpr::Op::Var);
  n->name = name;
  return n;
}

std::shared_ptr<RawExpr> power(std::shared_ptr<RawExpr> b, const Rational& p) {
  auto n = node(RawExpr::Op::Pow, {std::move(b)});
  n->value = p;
  return n;
}

std::shared_ptr<RawExpr> func(Function f, std::shared_ptr<RawExpr> a) {
  auto n = node(RawExpr::Op::Func, {std::move(a)});
  n->function = f;
  return n;
}

template <class T>
T pick(Rng& rng, const std::vector<T>& options) {
  return options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
}

}  // namespace

std::optional<double> RawExpr::eval(const std::map<std::string, double>& at) const {
  std::vector<double> v;
  for (const auto& k : kids) {
    auto x = k->eval(at);
    if (!x) return std::nullopt;
    v.push_back(*x);
  }
  double r = 0;
  bool ok = true;
  switch (op) {
    case Op::Const: r = value.get_d(); break;
    case Op::Var: r = at.at(name); break;
    case Op::Add: r = v[0] + v[1]; break;
    case Op::Sub: r = v[0] - v[1]; break;
    case Op::Mul: r = v[0] * v[1]; break;
    case Op::Div:
      if (v[1] == 0) return std::nullopt;
      r = v[0] / v[1];
      break;
    case Op::Neg: r = -v[0]; break;
    case Op::Pow: {
      if (v[0] == 0 && value < 0) return std::nullopt;
      long q = value.get_den().get_si();
      long p = value.get_num().get_si();
      double mag = std::pow(std::fabs(v[0]), value.get_d());
      bool odd_num = p % 2 != 0, odd_den = q % 2 != 0;
      r = (v[0] < 0 && odd_den && odd_num) ? -mag : mag;
      break;
    }
    case Op::Func: r = eval_function(function, v[0], ok); break;
  }
  if (!ok || std::isnan(r)) return std::nullopt;
  return r;
}

Expr RawExpr::build() const {
  switch (op) {
    case Op::Const: return Expr::constant(value);
    case Op::Var: return Expr::variable(name);
    case Op::Add: return kids[0]->build() + kids[1]->build();
    case Op::Sub: return kids[0]->build() - kids[1]->build();
    case Op::Mul: return kids[0]->build() * kids[1]->build();
    case Op::Div: return kids[0]->build() / kids[1]->build();
    case Op::Neg: return -kids[0]->build();
    case Op::Pow: return Expr::pow(kids[0]->build(), value);
    case Op::Func: return Expr::func(function, kids[0]->build());
  }
  return Expr();
}

std::string RawExpr::text() const {
  auto q = [](const Rational& r) {
    std::string s = to_string(r);
    return r < 0 || !is_integer(r) ? "(" + s + ")" : s;
  };
  switch (op) {
    case Op::Const: return q(value);
    case Op::Var: return name;
    case Op::Add: return "(" + kids[0]->text() + " + " + kids[1]->text() + ")";
    case Op::Sub: return "(" + kids[0]->text() + " - " + kids[1]->text() + ")";
    case Op::Mul: return "(" + kids[0]->text() + "*" + kids[1]->text() + ")";
    case Op::Div: return "(" + kids[0]->text() + "/" + kids[1]->text() + ")";
    case Op::Neg: return "(-" + kids[0]->text() + ")";
    case Op::Pow: return "(" + kids[0]->text() + ")^" + q(value);
    case Op::Func: return std::string(function_name(function)) + "(" + kids[0]->text() + ")";
  }
  return "0";
}

Rational random_rational(Rng& rng, long max_num, long max_den) {
  long n = std::uniform_int_distribution<long>(-max_num, max_num)(rng);
  long d = std::uniform_int_distribution<long>(1, max_den)(rng);
  return make_rational(n, d);
}

std::shared_ptr<RawExpr> random_raw(Rng& rng, const std::vector<std::string>& vars, int depth) {
  using Op = RawExpr::Op;
  auto leaf = [&]() -> std::shared_ptr<RawExpr> {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: return constant(random_rational(rng, 5, 3));
      case 1: return power(variable(pick(rng, vars)), pick(rng, std::vector<Rational>{2, 3, make_rational(1, 2),
                                                                                     make_rational(3, 2), -1}));
      default: return variable(pick(rng, vars));
    }
  };
  if (depth <= 0 || std::uniform_int_distribution<int>(0, 4)(rng) == 0) return leaf();
  auto sub = [&] { return random_raw(rng, vars, depth - 1); };
  switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
    case 0: return node(Op::Add, {sub(), sub()});
    case 1: return node(Op::Sub, {sub(), sub()});
    case 2: return node(Op::Mul, {sub(), sub()});
    case 3: {
      // c + s^2 with c > 0 keeps the quotient finite
      auto s = sub();
      auto den = node(Op::Add, {constant(make_rational(std::uniform_int_distribution<long>(1, 4)(rng), 2)),
                                power(s, 2)});
      return node(Op::Div, {sub(), den});
    }
    case 4: return node(Op::Neg, {sub()});
    case 5: return power(sub(), pick(rng, std::vector<Rational>{2, 3}));
    default: {
      Function f = pick(rng, std::vector<Function>{Function::Sin, Function::Cos, Function::Tan, Function::Sec,
                                                   Function::Exp, Function::Sqrt, Function::Abs});
      auto a = sub();
      switch (f) {
        case Function::Tan:
        case Function::Sec: a = func(Function::Sin, a); break;  // |arg| <= 1 < pi/2
        case Function::Exp: a = func(Function::Cos, a); break;
        case Function::Sqrt: a = node(Op::Add, {constant(1), power(a, 2)}); break;
        default: break;
      }
      return func(f, a);
    }
  }
}

Expr random_univariate(Rng& rng, const std::string& t) {
  Expr tv = Expr::variable(t);
  std::vector<Rational> exps = {make_rational(1, 2), make_rational(1, 3), make_rational(2, 3), 1,
                                make_rational(3, 2), 2};
  auto atom = [&] { return Expr::pow(tv, pick(rng, exps)); };
  auto coeff = [&] {
    Rational c = random_rational(rng, 3, 2);
    return c == 0 ? Rational(1) : c;
  };
  auto inner = [&] {
    Expr u = Expr::constant(coeff()) * atom();
    if (std::uniform_int_distribution<int>(0, 1)(rng)) u = u + Expr::constant(coeff()) * atom();
    return u;
  };
  // phi(u) - phi(0) for functions, so every piece vanishes at 0 and can be nested
  auto apply = [&](const Expr& u) -> Expr {
    switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
      case 0: return sin(u);
      case 1: return tan(u);
      case 2: return cos(u) - Expr::constant(1);
      case 3: return exp(u) - Expr::constant(1);
      case 4: return sec(u) - Expr::constant(1);
      case 5: return abs(u);
      case 6: return Expr::pow(Expr::constant(1) + u, pick(rng, std::vector<Rational>{-1, make_rational(1, 3), 2})) -
                     Expr::constant(1);
      default: return sqrt(Expr::pow(tv, 2) * (Expr::constant(1) + u));
    }
  };
  auto piece = [&] {
    Expr e = apply(inner());
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) e = apply(e);
    return e;
  };
  Expr e = piece();
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return e + Expr::constant(coeff()) * piece();
    case 1: return e * piece();
    case 2: return e / (Expr::constant(1) + piece());
    default: return e;
  }
}

SlopeFit fit_series_error(const Expr& e, const PuiseuxSeries& series, const std::string& t) {
  std::vector<double> xs, ys;
  for (int k = 4; k <= 20; ++k) {
    HiFloat tv = ScalarTraits<HiFloat>::from_rational(make_rational(1, 1L << k));
    auto value = evaluate<HiFloat>(e, {{t, tv}});
    if (!value) continue;
    HiFloat err = abs(*value - series.evaluate(tv));
    if (err < HiFloat("1e-500")) continue;  // rounding level
    xs.push_back(-k * std::log(2.0));
    ys.push_back(static_cast<double>(log(err)));
  }
  SlopeFit fit;
  if (xs.size() < 2) {
    fit.exact = true;
    return fit;
  }
  auto least_squares = [&](const std::vector<double>& y) {
    double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += y[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  std::vector<double> envelope = ys;
  for (size_t i = envelope.size() - 1; i-- > 0;) envelope[i] = std::max(envelope[i], envelope[i + 1]);
  fit.slope = least_squares(envelope);
  fit.raw_slope = least_squares(ys);
  return fit;
}

namespace {

// Solves the square system M y = r exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> r) {
  size_t n = r.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    for (size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      Rational f = m[row][col] / m[col][col];
      for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
      r[row] -= f * r[col];
    }
  }
  std::vector<Rational> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = r[i] / m[i][i];
  return y;
}

}  // namespace

std::optional<Rational> brute_force_lp(const std::vector<std::vector<Rational>>& w, const std::vector<Rational>& e) {
  size_t k = w.size(), n = e.size();
  for (const auto& wi : w) {
    bool zero = true;
    for (const auto& x : wi) zero = zero && x == 0;
    if (zero) return std::nullopt;
  }
  // rows: n exponent constraints, then k sign constraints -c_i <= 0
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(k);
    for (size_t i = 0; i < k; ++i) row[i] = w[i][j];
    rows.push_back(row);
    rhs.push_back(e[j]);
  }
  for (size_t i = 0; i < k; ++i) {
    std::vector<Rational> row(k, Rational(0));
    row[i] = -1;
    rows.push_back(row);
    rhs.push_back(0);
  }
  std::optional<Rational> best;
  size_t total = rows.size();
  std::vector<bool> mask(total, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(k), true);
  std::sort(mask.begin(), mask.end());
  do {
    std::vector<std::vector<Rational>> m;
    std::vector<Rational> r;
    for (size_t i = 0; i < total; ++i)
      if (mask[i]) {
        m.push_back(rows[i]);
        r.push_back(rhs[i]);
      }
    auto y = solve(m, r);
    if (!y) continue;
    bool feasible = true;
    for (size_t i = 0; i < total && feasible; ++i) {
      Rational s = 0;
      for (size_t c = 0; c < k; ++c) s += rows[i][c] * (*y)[c];
      feasible = s <= rhs[i];
    }
    if (!feasible) continue;
    Rational obj = 0;
    for (const auto& c : *y) obj += c;
    if (!best || obj > *best) best = obj;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace mvlim::testing

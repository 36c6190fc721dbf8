#include "mvlim/limits.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/polynomial.hpp"

#include <algorithm>
#include <set>

namespace mvlim {

namespace {

const char* const kReductionVar = "u";

Rational default_order(const Expr& den) {
  if (auto p = as_polynomial(den)) return 2 * total_degree(*p) + 2;
  return 8;
}

/// Expansion that tolerates negative exponents, doubling the working cap
/// until `order` is reached or the attempts run out.
PuiseuxSeries expand_to(const Expr& e, const std::string& t, const Rational& order) {
  Rational cap = order;
  PuiseuxSeries s(t);
  for (int attempt = 0; attempt < 5; ++attempt) {
    s = expand_with_cap(e, t, cap);
    if (s.is_exact() || *s.order() >= order) return s.truncated(order);
    cap = cap > 0 ? cap * 2 : Rational(1);
  }
  return s;
}

int sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

void collect_function_args(const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == Kind::Func) {
    out.push_back(e.arg());
    return;
  }
  if (e.kind() == Kind::Add || e.kind() == Kind::Mul || e.kind() == Kind::Pow)
    for (const auto& c : e.operands()) collect_function_args(c, out);
}

Expr replace_function_args(const Expr& e, const Expr& by) {
  switch (e.kind()) {
    case Kind::Func: return Expr::func(e.function(), by);
    case Kind::Add: {
      std::vector<Expr> parts;
      for (const auto& c : e.operands()) parts.push_back(replace_function_args(c, by));
      return Expr::add(std::move(parts));
    }
    case Kind::Mul: {
      std::vector<Expr> parts;
      for (const auto& c : e.operands()) parts.push_back(replace_function_args(c, by));
      return Expr::mul(std::move(parts));
    }
    case Kind::Pow: return Expr::pow(replace_function_args(e.base(), by), e.exponent());
    default: return e;
  }
}

bool has_function(const Expr& e) {
  std::vector<Expr> args;
  collect_function_args(e, args);
  return !args.empty();
}

}  // namespace

std::string fresh_parameter(const std::vector<std::string>& taken) {
  auto free = [&](const std::string& n) { return std::find(taken.begin(), taken.end(), n) == taken.end(); };
  for (const char* n : {"t", "s", "tau"})
    if (free(n)) return n;
  for (int i = 0;; ++i)
    if (free("t" + std::to_string(i))) return "t" + std::to_string(i);
}

OneSidedLimit limit_at_zero_plus(const Expr& num, const Expr& den, const std::string& t,
                                 std::optional<Rational> order) {
  OneSidedLimit out;
  Rational o = order ? *order : default_order(den);
  try {
    PuiseuxSeries d(t);
    for (int attempt = 0; attempt < 5; ++attempt) {
      d = expand_to(den, t, o);
      if (d.is_zero() || d.has_leading_term()) break;
      o *= 2;
    }
    out.den_series = d.to_string();
    if (d.is_zero()) {
      out.reason = "denominator vanishes identically";
      return out;
    }
    if (!d.has_leading_term()) {
      out.reason = "denominator leading term not found up to " + d.to_string();
      return out;
    }
    const auto dl = d.leading();
    PuiseuxSeries n = expand_to(num, t, dl.exponent + 1);
    out.num_series = n.to_string();
    if (n.has_leading_term() && n.leading().exponent <= dl.exponent) {
      Rational ratio = n.leading().coefficient / dl.coefficient;
      if (n.leading().exponent == dl.exponent)
        out.value = ExtendedValue::finite(ratio);
      else
        out.value = sign(ratio) > 0 ? ExtendedValue::plus_infinity() : ExtendedValue::minus_infinity();
    } else if (n.is_exact() || *n.order() > dl.exponent) {
      out.value = ExtendedValue::finite(Rational(0));
    } else {
      out.reason = "numerator not resolved to the denominator's order";
    }
  } catch (const SeriesError& e) {
    out.reason = e.what();
  }
  return out;
}

TwoSidedLimit two_sided_limit(const Expr& num, const Expr& den, const std::string& t, std::optional<Rational> order) {
  TwoSidedLimit out;
  out.right = limit_at_zero_plus(num, den, t, order);
  std::map<std::string, Expr> flip{{t, -Expr::variable(t)}};
  out.left = limit_at_zero_plus(substitute(num, flip), substitute(den, flip), t, order);
  if (!out.right.value || !out.left.value) {
    out.reason = !out.right.value ? out.right.reason : out.left.reason;
    return out;
  }
  if (*out.right.value == *out.left.value) {
    out.value = out.right.value;
  } else {
    out.reason = "one-sided limits differ: " + out.right.value->to_string() + " from the right, " +
                 out.left.value->to_string() + " from the left";
  }
  return out;
}

Verdict univariate_limit(const Expr& num, const Expr& den, const std::string& t, std::optional<Rational> order) {
  OneSidedLimit r = limit_at_zero_plus(num, den, t, order);
  if (!r.value) return Verdict::inconclusive(r.reason);
  if (r.value->is_finite()) return Verdict::exists(Expr::constant(r.value->value));
  WitnessPath w;
  w.label = "t->0+";
  w.param[t] = Expr::variable(t);
  w.value = *r.value;
  return Verdict::does_not_exist({w}, "unbounded: " + r.value->to_string());
}

std::optional<SeriesApprox> taylor_leading(const Expr& e, int max_order) {
  std::vector<Expr> factors = e.kind() == Kind::Mul ? e.operands() : std::vector<Expr>{e};
  std::vector<Expr> mono, rest;
  for (const auto& f : factors) {
    if (!has_function(f)) {
      auto p = as_polynomial(f);
      if (p && p->size() == 1) {
        mono.push_back(f);
        continue;
      }
    }
    rest.push_back(f);
  }
  Expr g = Expr::mul(rest);
  std::vector<Expr> args;
  collect_function_args(g, args);
  if (args.empty()) return std::nullopt;
  const Expr m = args.front();
  for (const auto& a : args)
    if (a != m) return std::nullopt;
  auto mp = as_polynomial(m);
  if (!mp || mp->size() != 1 || mp->front().exponents.empty()) return std::nullopt;
  for (const auto& [v, p] : mp->front().exponents)
    if (!is_integer(p) || p <= 0) return std::nullopt;

  Expr u = Expr::variable(kReductionVar);
  Expr reduced = replace_function_args(g, u);
  if (m.kind() == Kind::Var) reduced = substitute(reduced, {{m.name(), u}});
  auto fv = free_variables(reduced);
  if (!(fv.empty() || (fv.size() == 1 && *fv.begin() == kReductionVar))) return std::nullopt;

  PuiseuxSeries s(kReductionVar);
  try {
    s = puiseux_expand(reduced, kReductionVar, Rational(max_order));
  } catch (const SeriesError&) {
    return std::nullopt;
  }
  if (!s.has_leading_term()) return std::nullopt;
  const auto lead = s.leading();
  if (!is_integer(lead.exponent)) return std::nullopt;
  Expr lead_u = Expr::constant(lead.coefficient) * pow(u, lead.exponent);
  TwoSidedLimit eq = two_sided_limit(reduced, lead_u, kReductionVar);
  if (!eq.value || *eq.value != ExtendedValue::finite(Rational(1))) return std::nullopt;

  SeriesApprox out;
  out.original = e;
  out.inner = m;
  std::vector<Expr> lf = mono;
  lf.push_back(Expr::constant(lead.coefficient));
  lf.push_back(pow(m, lead.exponent));
  out.leading = Expr::mul(std::move(lf));
  out.equivalence_ratio_limit = 1;
  out.justification = "u=" + to_string(m) + ": " + to_string(reduced) + " = " + s.to_string() + ", lim " +
                      to_string(reduced) + "/(" + to_string(lead_u) + ") = 1 as u->0";
  std::set<std::string> sv;
  for (const auto& f : mono)
    for (const auto& v : free_variables(f)) sv.insert(v);
  for (const auto& v : free_variables(m)) sv.insert(v);
  out.singular_vars.assign(sv.begin(), sv.end());
  return out;
}

}  // namespace mvlim

#include "mvlim/transversal.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/hifloat.hpp"
#include "mvlim/isolated.hpp"
#include "mvlim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mvlim {

namespace {

using DoubleMap = std::map<std::string, double>;

std::string vector_string(const std::vector<Rational>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

std::map<std::string, Expr> point_bindings(const Point& p) {
  std::map<std::string, Expr> out;
  for (const auto& [v, c] : p) out[v] = Expr::constant(c);
  return out;
}

std::optional<double> eval_double(const Expr& e, const DoubleMap& at) {
  auto v = evaluate<double>(e, at);
  if (!v || !std::isfinite(*v)) return std::nullopt;
  return v;
}

std::optional<HiFloat> eval_hi(const Expr& e, const std::map<std::string, HiFloat>& at) {
  return evaluate<HiFloat>(e, at);
}

double radical_inverse(unsigned long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

/// Grid-rounded rational approximation, for readable witness lines.
Rational round_rational(double x) { return Rational(static_cast<long>(std::lround(x * 1024.0)), 1024); }

std::vector<Rational> normalized(const std::vector<Rational>& v) {
  for (const auto& c : v)
    if (c != 0) {
      std::vector<Rational> out;
      for (const auto& d : v) out.push_back(d / c);
      return out;
    }
  throw std::invalid_argument("direction must be nonzero");
}

std::vector<std::vector<Rational>> candidate_directions(size_t n) {
  std::vector<std::vector<Rational>> out;
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rational> e(n, Rational(0));
    e[i] = 1;
    out.push_back(e);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (int sg : {1, -1}) {
        std::vector<Rational> e(n, Rational(0));
        e[i] = 1;
        e[j] = sg;
        out.push_back(e);
      }
  return out;
}

std::string sign_label(const std::vector<int>& signs) {
  std::string s = "(";
  for (size_t i = 0; i < signs.size(); ++i) s += std::string(i ? "," : "") + (signs[i] > 0 ? "+" : "-");
  return s + ")";
}

/// Checks that f vanishes on C: exactly on parameterizations when the
/// substitution cancels, otherwise at high-precision points of C.
std::pair<bool, StepStatus> numerator_vanishes_on(const Expr& f, const ZeroSetSpec& spec,
                                                  const std::vector<std::string>& vars, const Point& p,
                                                  std::string& detail) {
  StepStatus status = StepStatus::ProvedExact;
  for (const auto& c : spec.curves) {
    if (!c.is_implicit()) {
      Expr on = substitute(f, c.param);
      if (on.is_zero()) continue;
      status = StepStatus::CheckedNumerically;
      for (int k = 3; k <= 12; ++k) {
        for (int sg : {1, -1}) {
          HiFloat s = ScalarTraits<HiFloat>::from_rational(Rational(sg, 1L << k));
          auto v = eval_hi(on, {{c.param_name, s}});
          if (v && abs(*v) > HiFloat("1e-100")) {
            detail = "numerator is " + v->convert_to<std::string>().substr(0, 12) + " on " + c.describe();
            return {false, status};
          }
        }
      }
      continue;
    }
    status = StepStatus::CheckedNumerically;
    // Bisect between samples on opposite sides of phi = 0.
    const auto pts = ball_samples(vars, p, Rational(1, 8), 256);
    const Expr& phi = *c.implicit;
    std::optional<DoubleMap> pos, neg;
    int checked = 0;
    for (const auto& x : pts) {
      auto v = eval_double(phi, x);
      if (!v || *v == 0) continue;
      (*v > 0 ? pos : neg) = x;
      if (!(pos && neg)) continue;
      std::map<std::string, HiFloat> a, b;
      for (const auto& var : vars) {
        a[var] = HiFloat((*pos)[var]);
        b[var] = HiFloat((*neg)[var]);
      }
      std::map<std::string, HiFloat> mid;
      for (int it = 0; it < 200; ++it) {
        for (const auto& var : vars) mid[var] = (a[var] + b[var]) / 2;
        auto m = eval_hi(phi, mid);
        if (!m) break;
        if (*m > 0) a = mid;
        else b = mid;
      }
      auto fv = eval_hi(f, mid);
      if (fv && abs(*fv) > HiFloat("1e-30")) {
        detail = "numerator does not vanish on " + c.describe();
        return {false, status};
      }
      pos.reset();
      neg.reset();
      if (++checked >= 8) break;
    }
  }
  return {true, status};
}

}  // namespace

std::string CurveSpec::describe() const {
  if (implicit) return to_string(*implicit) + " = 0";
  std::string s = "(";
  bool first = true;
  for (const auto& [v, e] : param) {
    s += (first ? "" : ", ") + v + "=" + to_string(e);
    first = false;
  }
  return s + ")";
}

bool ComponentSpec::contains(const DoubleMap& x) const {
  for (const auto& c : where) {
    auto v = eval_double(c.expr, x);
    if (!v) return false;
    if (c.sign > 0 ? !(*v > 0) : !(*v < 0)) return false;
  }
  return true;
}

std::vector<DoubleMap> ball_samples(const std::vector<std::string>& vars, const Point& p, const Rational& radius,
                                    int count, bool punctured) {
  static const unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (vars.size() > std::size(kPrimes)) throw std::invalid_argument("too many variables for sampling");
  const double r = radius.get_d();
  std::vector<DoubleMap> out;
  for (unsigned long i = 1; static_cast<int>(out.size()) < count && i < 64UL * static_cast<unsigned long>(count) + 64;
       ++i) {
    std::vector<double> y;
    double norm2 = 0;
    for (size_t j = 0; j < vars.size(); ++j) {
      y.push_back(2.0 * radical_inverse(i, kPrimes[j]) - 1.0);
      norm2 += y.back() * y.back();
    }
    if (norm2 > 1.0 || (punctured && norm2 == 0.0)) continue;
    DoubleMap x;
    for (size_t j = 0; j < vars.size(); ++j) x[vars[j]] = p.at(vars[j]).get_d() + r * y[j];
    out.push_back(std::move(x));
  }
  return out;
}

TransversalityResult check_transversality(const ZeroSetSpec& spec, const std::vector<Rational>& v,
                                          const std::vector<std::string>& vars, const Point& p) {
  TransversalityResult out;
  out.transversal = true;
  if (v.size() != vars.size()) throw std::invalid_argument("direction has the wrong dimension");
  for (const auto& c : spec.curves) {
    if (c.is_implicit()) {
      auto at = exact_value_at(*c.implicit, p);
      if (!at || *at != 0) {
        out.transversal = false;
        out.detail = c.describe() + " does not pass through the point";
        return out;
      }
      std::vector<Rational> grad;
      Rational dot = 0;
      bool zero = true;
      for (size_t j = 0; j < vars.size(); ++j) {
        auto gj = exact_value_at(differentiate(*c.implicit, vars[j]), p);
        if (!gj) {
          out.transversal = false;
          out.degenerate = true;
          out.detail = "gradient of " + to_string(*c.implicit) + " is not exact at the point";
          return out;
        }
        grad.push_back(*gj);
        zero = zero && *gj == 0;
        dot += *gj * v[j];
      }
      if (zero) {
        out.transversal = false;
        out.degenerate = true;
        out.detail = "gradient of " + to_string(*c.implicit) + " vanishes at the point";
        return out;
      }
      out.certificate.add("lhopital-transversal", "v=" + vector_string(v) + ", " + c.describe(),
                          "v . grad = " + to_string(dot) + " with grad = " + vector_string(grad) +
                              (dot != 0 ? ", transverse" : ", tangent"));
      if (dot == 0) {
        out.transversal = false;
        out.detail = "v is tangent to " + c.describe();
        return out;
      }
      continue;
    }
    std::vector<Rational> tangent;
    bool zero = true;
    for (const auto& var : vars) {
      auto it = c.param.find(var);
      Expr coord = it == c.param.end() ? Expr::constant(p.at(var)) : it->second;
      auto at0 = exact_value_at(coord, {{c.param_name, Rational(0)}});
      if (!at0 || *at0 != p.at(var)) {
        out.transversal = false;
        out.detail = c.describe() + " does not pass through the point at " + c.param_name + "=0";
        return out;
      }
      auto d = exact_value_at(differentiate(coord, c.param_name), {{c.param_name, Rational(0)}});
      if (!d) {
        out.transversal = false;
        out.degenerate = true;
        out.detail = "tangent of " + c.describe() + " is not exact at the point";
        return out;
      }
      tangent.push_back(*d);
      zero = zero && *d == 0;
    }
    if (zero) {
      out.transversal = false;
      out.degenerate = true;
      out.detail = "tangent of " + c.describe() + " vanishes at the point";
      return out;
    }
    bool parallel = true;
    for (size_t i = 0; i < vars.size() && parallel; ++i)
      for (size_t j = i + 1; j < vars.size() && parallel; ++j)
        if (tangent[i] * v[j] - tangent[j] * v[i] != 0) parallel = false;
    if (vars.size() == 1) parallel = true;
    out.certificate.add("lhopital-transversal", "v=" + vector_string(v) + ", " + c.describe(),
                        "tangent " + vector_string(tangent) + (parallel ? " is parallel to v" : " is not parallel to v"));
    if (parallel) {
      out.transversal = false;
      out.detail = "v is tangent to " + c.describe();
      return out;
    }
  }
  return out;
}

FalsifyResult falsify_nonvanishing(const Expr& g, const std::vector<std::string>& vars, const std::vector<Rational>& v,
                                   const ComponentSpec& component, const Point& p, const Rational& radius,
                                   int samples) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  FalsifyResult out;
  const Expr dg = directional_derivative(g, vars, v);
  auto as_vector = [&](const DoubleMap& x) {
    std::vector<double> out;
    for (const auto& var : vars) out.push_back(x.at(var));
    return out;
  };

  std::vector<DoubleMap> pts;
  for (const auto& s : component.seeds) {
    DoubleMap x;
    for (const auto& var : vars) x[var] = s.at(var).get_d();
    pts.push_back(std::move(x));
  }
  for (auto& x : ball_samples(vars, p, radius, samples)) pts.push_back(std::move(x));

  std::optional<DoubleMap> pos, neg;
  for (const auto& x : pts) {
    if (!component.contains(x)) continue;
    auto gv = eval_double(g, x);
    if (!gv || *gv == 0) continue;
    ++out.samples_in_component;
    if (out.members.size() < 64) out.members.push_back(x);
    if (out.symbolic_zero || out.counterexample) continue;
    auto d = eval_double(dg, x);
    if (!d) continue;
    if (std::fabs(*d) < 1e-12) {
      out.counterexample = as_vector(x);
      out.detail = "|D_v g| < 1e-12 at a sample";
      continue;
    }
    (*d > 0 ? pos : neg) = x;
  }
  if (out.samples_in_component == 0) {
    out.empty_component = true;
    out.detail = "no sample or seed point in the component";
    return out;
  }
  if (dg.is_zero()) {
    out.symbolic_zero = true;
    out.counterexample = as_vector(out.members.front());
    out.detail = "D_v g is identically zero";
    return out;
  }
  if (out.counterexample) return out;
  if (pos && neg) {
    DoubleMap a = *pos, b = *neg, mid;
    for (int it = 0; it < 80; ++it) {
      for (const auto& var : vars) mid[var] = (a[var] + b[var]) / 2;
      auto d = eval_double(dg, mid);
      if (!d) break;
      if (*d == 0) break;
      (*d > 0 ? a : b) = mid;
    }
    out.counterexample = as_vector(mid);
    out.detail = "D_v g changes sign in the component";
    return out;
  }
  auto at_p = exact_value_at(dg, p);
  if (at_p && *at_p != 0) {
    out.proved_nonzero = true;
    out.detail = "D_v g(p) = " + to_string(*at_p) + " != 0, so D_v g has no zero near p";
  } else {
    out.detail = "not falsified by " + std::to_string(out.samples_in_component) + " samples within radius " +
                 to_string(radius);
  }
  return out;
}

std::optional<ZeroSetSpec> detect_zero_set(const LimitProblem& problem) {
  const Expr& g = problem.denominator;
  if (g.kind() != Kind::Add || g.operands().size() != 2) return std::nullopt;
  const Expr& t1 = g.operands()[0];
  const Expr& t2 = g.operands()[1];
  if (t1.coefficient() != -t2.coefficient()) return std::nullopt;
  Expr f1 = t1.without_coefficient(), f2 = t2.without_coefficient();
  if (f1.kind() != Kind::Func || f2.kind() != Kind::Func || f1.function() != f2.function()) return std::nullopt;
  const Function phi = f1.function();
  bool even = phi == Function::Cos || phi == Function::Sec;
  if (!(even || phi == Function::Sin || phi == Function::Tan || phi == Function::Exp)) return std::nullopt;
  ZeroSetSpec spec;
  for (const Expr& c : {f1.arg() - f2.arg(), f1.arg() + f2.arg()}) {
    if (spec.curves.size() == 1 && !even) break;
    auto at = exact_value_at(c, problem.point);
    if (!at || *at != 0) continue;
    CurveSpec cs;
    cs.implicit = c;
    spec.curves.push_back(cs);
  }
  if (spec.curves.empty()) return std::nullopt;
  return spec;
}

NonisolatedResolution resolve_nonisolated_detailed(const LimitProblem& problem, const ZeroSetSpec& input,
                                                   const TransversalOptions& options) {
  problem.validate();
  NonisolatedResolution out;
  Certificate& cert = out.resolution.certificate;
  Verdict& verdict = out.resolution.verdict;
  const auto& vars = problem.vars;
  const Point& p = problem.point;
  ZeroSetSpec spec = input;

  if (spec.curves.empty()) {
    CurveSpec cs;
    cs.implicit = problem.denominator;
    spec.curves.push_back(cs);
    cert.add("lhopital-transversal", to_string(problem.denominator),
             "no zero set given; using the denominator's own zero set as C", StepStatus::Assumed);
  }

  std::string detail;
  auto [vanishes, vstatus] = numerator_vanishes_on(problem.numerator, spec, vars, p, detail);
  if (!vanishes) {
    verdict = Verdict::inconclusive("hypothesis failed: " + detail);
    cert.add("lhopital-transversal", "f on C", detail);
    return out;
  }
  cert.add("lhopital-transversal", "f on C", "numerator vanishes on the zero set", vstatus);

  if (spec.components.empty()) {
    std::vector<const CurveSpec*> implicit;
    for (const auto& c : spec.curves)
      if (c.is_implicit()) implicit.push_back(&c);
    if (implicit.empty() || implicit.size() > 4) {
      spec.components.push_back({"whole", {}, {}, {}});
    } else {
      const size_t k = implicit.size();
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        ComponentSpec cs;
        std::vector<int> signs;
        for (size_t i = 0; i < k; ++i) {
          int sg = (mask >> (k - 1 - i)) & 1u ? -1 : 1;
          signs.push_back(sg);
          cs.where.push_back({*implicit[i]->implicit, sg});
        }
        cs.id = sign_label(signs);
        spec.components.push_back(std::move(cs));
      }
    }
  }

  std::vector<ComponentResult> results;
  for (const auto& comp : spec.components) {
    ComponentResult cr;
    cr.id = comp.id;
    std::vector<std::vector<Rational>> candidates;
    if (!comp.direction.empty()) candidates.push_back(comp.direction);
    else candidates = candidate_directions(vars.size());

    std::optional<std::vector<Rational>> chosen;
    FalsifyResult fr;
    std::string failure;
    bool empty = false;
    for (const auto& v : candidates) {
      TransversalityResult tr = check_transversality(spec, v, vars, p);
      if (!tr.transversal) {
        failure = "direction " + vector_string(v) + ": " + tr.detail;
        if (!comp.direction.empty()) cert.append(tr.certificate);
        continue;
      }
      FalsifyResult f = falsify_nonvanishing(problem.denominator, vars, v, comp, p, options.radius, options.samples);
      if (f.empty_component) {
        empty = true;
        break;
      }
      if (f.counterexample) {
        std::string at;
        for (double x : *f.counterexample) at += (at.empty() ? "" : ", ") + std::to_string(x);
        failure = "direction " + vector_string(v) + ": D_v g vanishes in component " + comp.id + " near (" + at +
                  "): " + f.detail;
        if (!comp.direction.empty())
          cert.add("lhopital-transversal", "component " + comp.id, failure, StepStatus::CheckedNumerically);
        continue;
      }
      cert.append(tr.certificate);
      chosen = normalized(v);
      fr = std::move(f);
      break;
    }
    if (empty) {
      if (comp.where.empty() && comp.seeds.empty()) {
        verdict = Verdict::inconclusive("component " + comp.id + " is empty in the sampling budget");
        return out;
      }
      if (input.components.empty()) {
        cert.add("lhopital-transversal", "component " + comp.id, "sign cell has no sample points; skipped",
                 StepStatus::CheckedNumerically);
        continue;
      }
      verdict = Verdict::inconclusive("component " + comp.id + " is empty; seed points are required");
      return out;
    }
    if (!chosen) {
      verdict = Verdict::inconclusive("hypothesis failed in component " + comp.id + ": " + failure);
      return out;
    }
    cr.direction = *chosen;
    cert.add("lhopital-transversal", "component " + comp.id + ", v=" + vector_string(cr.direction),
             "D_v g != 0 on the component: " + fr.detail,
             fr.proved_nonzero ? StepStatus::ProvedExact : StepStatus::Assumed);
    if (!fr.members.empty()) {
      Point s;
      for (const auto& var : vars) s[var] = round_rational(fr.members.front().at(var));
      cr.sample = s;
    }

    cr.quotient_num = directional_derivative(problem.numerator, vars, cr.direction);
    cr.quotient_den = directional_derivative(problem.denominator, vars, cr.direction);
    const std::string q = to_string(cr.quotient_num) + " / " + to_string(cr.quotient_den);
    const auto bind = point_bindings(p);
    Expr dg_p = substitute(cr.quotient_den, bind);
    Expr df_p = substitute(cr.quotient_num, bind);
    std::set<std::string> fv = free_variables(cr.quotient_num);
    for (const auto& v : free_variables(cr.quotient_den)) fv.insert(v);

    if (free_variables(dg_p).empty() && !dg_p.is_zero() && free_variables(df_p).empty() &&
        defined_at(cr.quotient_num, p) && defined_at(cr.quotient_den, p)) {
      Expr value = df_p / dg_p;
      cr.verdict = Verdict::exists(value, "continuity");
      cert.add("lhopital-transversal", q,
               "limit on component " + cr.id + " equals D_v f(p)/D_v g(p) = " + to_string(value) + " by continuity");
    } else if (fv.size() == 1) {
      const std::string x = *fv.begin();
      const Rational px = p.at(x);
      std::map<std::string, Expr> shift{{x, Expr::variable(x) + Expr::constant(px)}};
      Expr n = substitute(cr.quotient_num, shift), d = substitute(cr.quotient_den, shift);
      bool any_pos = false, any_neg = false;
      for (const auto& m : fr.members) {
        double dx = m.at(x) - px.get_d();
        any_pos = any_pos || dx > 0;
        any_neg = any_neg || dx < 0;
      }
      std::optional<ExtendedValue> value;
      std::string reason;
      if (any_pos && !any_neg) {
        auto r = limit_at_zero_plus(n, d, x, options.order);
        value = r.value;
        reason = r.reason;
      } else if (any_neg && !any_pos) {
        std::map<std::string, Expr> flip{{x, -Expr::variable(x)}};
        auto r = limit_at_zero_plus(substitute(n, flip), substitute(d, flip), x, options.order);
        value = r.value;
        reason = r.reason;
      } else {
        auto r = two_sided_limit(n, d, x, options.order);
        value = r.value;
        reason = r.reason;
      }
      if (value && value->is_finite()) {
        cr.verdict = Verdict::exists(Expr::constant(value->value), "univariate quotient");
        cert.add("lhopital-transversal", q,
                 "limit on component " + cr.id + " is " + value->to_string() + " (one variable, " + x +
                     (any_pos && !any_neg ? " > " : any_neg && !any_pos ? " < " : " near ") + to_string(px) + ")");
      } else if (value) {
        cr.verdict = Verdict::inconclusive("component " + cr.id + " limit is " + value->to_string());
      } else {
        cr.verdict = Verdict::inconclusive("component " + cr.id + ": " + reason);
      }
    } else if (options.depth < 1) {
      IsolatedOptions io;
      io.order = options.order;
      io.seed = options.seed;
      io.depth = 1;
      LimitProblem sub{cr.quotient_num, cr.quotient_den, vars, p};
      Resolution r = resolve_isolated(sub, io);
      cert.add("lhopital-transversal", q, "recursive resolution of the derivative quotient: " + to_string(r.verdict.kind));
      cert.append(r.certificate);
      if (r.verdict.kind == Verdict::Kind::Exists) cr.verdict = r.verdict;
      else cr.verdict = Verdict::inconclusive("component " + cr.id + " quotient not resolved");
    } else {
      cr.verdict = Verdict::inconclusive("component " + cr.id + ": recursion depth reached");
    }
    results.push_back(std::move(cr));
  }
  out.components = results;

  if (results.empty()) {
    verdict = Verdict::inconclusive("no nonempty component");
    return out;
  }
  const ComponentResult* first = nullptr;
  for (const auto& r : results) {
    if (r.verdict.kind != Verdict::Kind::Exists) continue;
    if (!first) {
      first = &r;
      continue;
    }
    auto a = first->verdict.rational_value(), b = r.verdict.rational_value();
    bool differ = a && b ? *a != *b : first->verdict.value != r.verdict.value;
    if (!differ) continue;
    std::vector<WitnessPath> w;
    const std::string tn = fresh_parameter(vars);
    const Expr t = Expr::variable(tn);
    for (const ComponentResult* c : {first, &r}) {
      WitnessPath path;
      path.label = "line into component " + c->id;
      if (c->sample) {
        for (const auto& var : vars)
          path.param[var] = Expr::constant(p.at(var)) + Expr::constant(c->sample->at(var) - p.at(var)) * t;
        auto lim = limit_at_zero_plus(substitute(problem.numerator, path.param),
                                      substitute(problem.denominator, path.param), tn, options.order);
        if (lim.value) path.value = *lim.value;
        else if (auto q = c->verdict.rational_value()) path.value = ExtendedValue::finite(*q);
      } else if (auto q = c->verdict.rational_value()) {
        path.value = ExtendedValue::finite(*q);
      }
      w.push_back(std::move(path));
    }
    verdict = Verdict::does_not_exist(w, "components " + first->id + " and " + r.id + " have different limits " +
                                             to_string(first->verdict.value) + " and " + to_string(r.verdict.value));
    cert.add("lhopital-transversal", "components", verdict.reason);
    return out;
  }
  for (const auto& r : results)
    if (r.verdict.kind != Verdict::Kind::Exists) {
      verdict = Verdict::inconclusive(r.verdict.reason);
      return out;
    }
  verdict = Verdict::exists(results.front().verdict.value, "every component gives the same limit");
  cert.add("lhopital-transversal", std::to_string(results.size()) + " components",
           "every component limit equals " + to_string(verdict.value) + ", so the limit is " + to_string(verdict.value));
  return out;
}

Resolution resolve_nonisolated(const LimitProblem& problem, const ZeroSetSpec& spec, const TransversalOptions& options) {
  return resolve_nonisolated_detailed(problem, spec, options).resolution;
}

}  // namespace mvlim

#include "mvlim/isolated.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/lp.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace mvlim {

namespace {

std::vector<Expr> terms_of(const Expr& e) {
  if (e.is_zero()) return {};
  if (e.kind() == Kind::Add) return e.operands();
  return {e};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string vector_string(const std::vector<Rational>& v) {
  std::vector<std::string> s;
  for (const auto& q : v) s.push_back(to_string(q));
  return "(" + join(s) + ")";
}

std::string expr_list(const std::vector<Expr>& v) {
  std::vector<std::string> s;
  for (const auto& e : v) s.push_back(to_string(e));
  return "(" + join(s) + ")";
}

bool is_monomial(const Expr& e) {
  auto p = as_polynomial(e);
  return p && p->size() == 1;
}

std::vector<Rational> exponent_vector(const ExponentMap& m, const std::vector<std::string>& vars) {
  std::vector<Rational> out;
  for (const auto& v : vars) {
    auto it = m.find(v);
    out.push_back(it == m.end() ? Rational(0) : it->second);
  }
  return out;
}

/// max sum c_i subject to sum_i c_i w_i <= e, c >= 0.
TermBound bound_term(const Expr& term, const std::vector<Rational>& e, const std::vector<std::vector<Rational>>& w) {
  const size_t k = w.size(), n = e.size();
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(k));
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < k; ++i) A[j][i] = w[i][j];
  LpResult r = maximize(std::vector<Rational>(k, Rational(1)), A, e);
  TermBound tb;
  tb.term = term;
  tb.exponents = e;
  tb.c = r.status == LpResult::Status::Optimal ? r.x : std::vector<Rational>(k, Rational(0));
  tb.alpha = r.status == LpResult::Status::Optimal ? r.value : Rational(0);
  tb.leftover = e;
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < k; ++i) tb.leftover[j] -= tb.c[i] * w[i][j];
  return tb;
}

std::map<std::string, Expr> zeros_except(const std::vector<std::string>& vars, const std::string& keep) {
  std::map<std::string, Expr> out;
  for (const auto& v : vars)
    if (v != keep) out[v] = Expr();
  return out;
}

std::string describe_param(const std::map<std::string, Expr>& param) {
  std::vector<std::string> s;
  for (const auto& [v, e] : param) s.push_back(v + "=" + to_string(e));
  return join(s);
}

/// Index pair with the largest gap; the first pair wins ties.
std::optional<std::pair<size_t, size_t>> widest_pair(const std::vector<WitnessPath>& paths) {
  std::optional<std::pair<size_t, size_t>> best;
  double best_gap = 0.0;
  for (size_t i = 0; i < paths.size(); ++i) {
    for (size_t j = i + 1; j < paths.size(); ++j) {
      double gap = value_gap(paths[i].value, paths[j].value);
      if (!best || gap > best_gap) {
        best = {i, j};
        best_gap = gap;
      }
    }
  }
  return best;
}

double widest_gap(const std::vector<WitnessPath>& paths) {
  auto p = widest_pair(paths);
  return p ? value_gap(paths[p->first].value, paths[p->second].value) : 0.0;
}

bool any_infinite(const std::vector<WitnessPath>& paths) {
  for (const auto& p : paths)
    if (!p.value.is_finite()) return true;
  return false;
}

// -- curve probe machinery --------------------------------------------------

struct SolveStep {
  size_t eq;
  std::string var;
  long d;
  Rational a;
  Expr M;     // monomial cofactor of var^d, in solved variables
  Expr rest;  // remaining terms, in solved variables
};

std::optional<std::vector<SolveStep>> triangular_order(const std::vector<Expr>& u, const std::vector<size_t>& eqs,
                                                       const std::vector<std::string>& vars, std::string& why) {
  std::vector<std::vector<Monomial>> polys;
  for (size_t i : eqs) {
    auto p = as_polynomial(u[i]);
    if (!p) {
      why = "u" + std::to_string(i + 1) + " is not polynomial";
      return std::nullopt;
    }
    polys.push_back(*p);
  }
  std::set<std::string> solved;
  std::vector<bool> used(eqs.size(), false);
  std::vector<SolveStep> steps;
  for (size_t round = 0; round < eqs.size(); ++round) {
    bool progressed = false;
    for (size_t q = 0; q < eqs.size() && !progressed; ++q) {
      if (used[q]) continue;
      std::set<std::string> fresh;
      for (const auto& mono : polys[q])
        for (const auto& [v, p] : mono.exponents)
          if (!solved.count(v)) fresh.insert(v);
      if (fresh.size() != 1) continue;
      const std::string x = *fresh.begin();
      std::vector<Expr> rest;
      std::optional<Monomial> lead;
      bool single = true;
      for (const auto& mono : polys[q]) {
        if (mono.exponents.count(x)) {
          if (lead) single = false;
          lead = mono;
        } else {
          rest.push_back(to_expr(mono));
        }
      }
      if (!single || !lead) continue;
      Rational d = lead->exponents.at(x);
      if (!is_integer(d) || d <= 0 || !d.get_num().fits_slong_p()) continue;
      Monomial cof = *lead;
      cof.exponents.erase(x);
      cof.coefficient = 1;
      steps.push_back({eqs[q], x, d.get_num().get_si(), lead->coefficient, to_expr(cof), Expr::add(rest)});
      solved.insert(x);
      used[q] = true;
      progressed = true;
    }
    if (!progressed) {
      why = "u_i = m_i t is not triangularly solvable";
      return std::nullopt;
    }
  }
  (void)vars;
  return steps;
}

struct PartialBranch {
  std::map<std::string, Expr> param;
  std::vector<int> sigma;
};

std::vector<PartialBranch> parameterize(const std::vector<SolveStep>& steps, const std::vector<std::string>& vars,
                                        const std::vector<Expr>& m_by_eq, const Expr& t, bool check_real) {
  std::vector<PartialBranch> branches{{}};
  const std::string tn = t.name();
  for (const auto& st : steps) {
    std::vector<PartialBranch> next;
    for (const auto& br : branches) {
      Expr M = substitute(st.M, br.param);
      Expr rest = substitute(st.rest, br.param);
      if (M.is_zero()) continue;
      Expr B = (m_by_eq[st.eq] * t - rest) / (Expr::constant(st.a) * M);
      if (st.d == 1) {
        PartialBranch nb = br;
        nb.param[st.var] = B;
        nb.sigma.push_back(0);
        next.push_back(std::move(nb));
        continue;
      }
      Expr root = pow(B, Rational(1, st.d));
      if (st.d % 2 == 1) {
        PartialBranch nb = br;
        nb.param[st.var] = root;
        nb.sigma.push_back(0);
        next.push_back(std::move(nb));
        continue;
      }
      if (check_real) {
        try {
          PuiseuxSeries s = expand_with_cap(B, tn, Rational(16));
          if (!s.is_zero() && (!s.has_leading_term() || s.leading().coefficient <= 0)) continue;
        } catch (const SeriesError&) {
          continue;
        }
      }
      for (int sg : {1, -1}) {
        PartialBranch nb = br;
        nb.param[st.var] = sg > 0 ? root : -root;
        nb.sigma.push_back(sg);
        next.push_back(std::move(nb));
      }
    }
    branches = std::move(next);
  }
  for (auto& br : branches)
    for (const auto& v : vars)
      if (!br.param.count(v)) br.param[v] = Expr();
  return branches;
}

/// Replaces t by t^L when every coordinate is a finite Puiseux sum, making
/// all exponents integral. Returns L (1 when nothing changed).
Rational rescale(std::map<std::string, Expr>& param, const std::string& t) {
  std::vector<PuiseuxSeries> series;
  std::vector<Rational> exps;
  for (const auto& [v, e] : param) {
    try {
      PuiseuxSeries s = expand_with_cap(e, t, Rational(256));
      if (!s.is_exact()) return Rational(1);
      for (const auto& term : s.terms()) exps.push_back(term.exponent);
      series.push_back(s);
    } catch (const SeriesError&) {
      return Rational(1);
    }
  }
  Rational L(lcm_of_denominators(exps));
  if (L == 1) return L;
  size_t i = 0;
  const Expr tv = Expr::variable(t);
  for (auto& [v, e] : param) {
    std::vector<Expr> parts;
    for (const auto& term : series[i].terms())
      parts.push_back(Expr::constant(term.coefficient) * pow(tv, term.exponent * L));
    e = Expr::add(std::move(parts));
    ++i;
  }
  return L;
}

std::string sigma_string(const std::vector<int>& sigma) {
  std::string out;
  for (int s : sigma) {
    if (s == 0) continue;
    out += s > 0 ? '+' : '-';
  }
  return out;
}

/// Leading coefficient in t of a polynomial after a monomial substitution.
std::optional<std::pair<Rational, Expr>> symbolic_lead(const std::vector<Monomial>& poly,
                                                      const std::map<std::string, Expr>& param,
                                                      const std::string& t) {
  std::map<Rational, std::vector<Expr>> by_exponent;
  for (const auto& mono : poly) {
    Expr T = substitute(to_expr(mono), param);
    Rational e = 0;
    std::vector<Expr> rest;
    for (const auto& f : T.kind() == Kind::Mul ? T.operands() : std::vector<Expr>{T}) {
      if (f.kind() == Kind::Var && f.name() == t) {
        e += 1;
      } else if (f.kind() == Kind::Pow && f.base().kind() == Kind::Var && f.base().name() == t) {
        e += f.exponent();
      } else {
        if (contains_variable(f, t)) return std::nullopt;
        rest.push_back(f);
      }
    }
    by_exponent[e].push_back(Expr::mul(rest));
  }
  for (auto& [e, parts] : by_exponent) {
    Expr c = Expr::add(parts);
    if (!c.is_zero()) return std::make_pair(e, c);
  }
  return std::nullopt;
}

WitnessPath untranslate(WitnessPath w, const LimitProblem& original, const Rational& shift) {
  for (const auto& v : original.vars) {
    const Rational& c = original.point.at(v);
    auto it = w.param.find(v);
    Expr base = it == w.param.end() ? Expr() : it->second;
    w.param[v] = base + Expr::constant(c);
  }
  if (w.value.is_finite()) w.value.value += shift;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

bool manifestly_nonnegative(const Expr& term) {
  if (term.coefficient() <= 0) return false;
  Expr rest = term.without_coefficient();
  std::vector<Expr> factors = rest.kind() == Kind::Mul ? rest.operands() : std::vector<Expr>{rest};
  for (const auto& f : factors) {
    if (f.is_constant()) continue;
    if (f.kind() == Kind::Pow && negative_base_sign(f.exponent()) > 0) continue;
    if (f.kind() == Kind::Func &&
        (f.function() == Function::Abs || f.function() == Function::Sqrt || f.function() == Function::Exp))
      continue;
    return false;
  }
  return true;
}

LimitProblem translated_to_origin(const LimitProblem& problem) {
  LimitProblem out = problem;
  out.numerator = translate_to_origin(problem.numerator, problem.point);
  out.denominator = translate_to_origin(problem.denominator, problem.point);
  for (auto& [v, c] : out.point) c = 0;
  return out;
}

std::vector<WitnessPath> PreliminaryProbeResult::witnesses() const {
  std::vector<WitnessPath> out;
  for (const auto& ax : restricted_limits)
    for (const auto& s : ax.sides) out.push_back(s);
  return out;
}

PreliminaryProbeResult preliminary_probe(const LimitProblem& problem) {
  PreliminaryProbeResult out;
  const std::string tn = fresh_parameter(problem.vars);
  const Expr t = Expr::variable(tn);
  for (const auto& x : problem.vars) {
    AxisRestriction ar;
    ar.var = x;
    auto others = zeros_except(problem.vars, x);
    Expr fx = substitute(problem.numerator, others);
    Expr gx = substitute(problem.denominator, others);
    if (gx.is_zero()) {
      ar.skipped = true;
      ar.note = "denominator vanishes on the " + x + "-axis; axis skipped";
      ar.verdict = Verdict::inconclusive(ar.note);
      out.certificate.add("axis-probe", x + "-axis", ar.note, StepStatus::ProvedExact);
      out.restricted_limits.push_back(std::move(ar));
      continue;
    }
    TwoSidedLimit tl = two_sided_limit(fx, gx, x);
    auto side = [&](const OneSidedLimit& os, int sg, const char* label) {
      if (!os.value) return;
      WitnessPath w;
      w.label = x + "-axis, " + label;
      for (const auto& v : problem.vars) w.param[v] = v == x ? (sg > 0 ? t : -t) : Expr();
      w.value = *os.value;
      ar.sides.push_back(std::move(w));
    };
    side(tl.right, 1, "right");
    side(tl.left, -1, "left");
    std::string inputs = to_string(fx) + " / " + to_string(gx);
    if (tl.value) {
      if (tl.value->is_finite()) {
        ar.verdict = Verdict::exists(Expr::constant(tl.value->value));
      } else {
        ar.verdict = Verdict::does_not_exist(ar.sides, "unbounded on the " + x + "-axis");
      }
      out.certificate.add("axis-probe", inputs,
                          "restricted limit on the " + x + "-axis is " + tl.value->to_string() + " (numerator " +
                              tl.right.num_series + ", denominator " + tl.right.den_series + ")");
    } else if (tl.right.value && tl.left.value) {
      ar.verdict = Verdict::does_not_exist(ar.sides, tl.reason);
      out.certificate.add("axis-probe", inputs, "on the " + x + "-axis " + tl.reason);
    } else {
      ar.verdict = Verdict::inconclusive(tl.reason);
      out.certificate.add("axis-probe", inputs, "restricted limit undecided: " + tl.reason, StepStatus::Assumed);
    }
    out.restricted_limits.push_back(std::move(ar));
  }

  std::vector<WitnessPath> decided = out.witnesses();
  if (decided.empty()) return out;
  auto pair = widest_pair(decided);
  bool unbounded = any_infinite(decided);
  if ((pair && widest_gap(decided) > 0) || unbounded) {
    std::vector<WitnessPath> w;
    if (pair) {
      w = {decided[pair->first], decided[pair->second]};
    } else {
      w = {decided.front()};
    }
    std::string why = unbounded ? "unbounded along an axis" : "axis restrictions disagree";
    out.verdict = Verdict::does_not_exist(w, why);
    out.certificate.add("axis-probe", "", "limit does not exist: " + why);
    return out;
  }
  const Rational l = decided.front().value.value;
  if (l != 0) {
    out.shift = l;
    out.shifted_numerator = problem.numerator - Expr::constant(l) * problem.denominator;
    out.certificate.add("axis-probe", "l=" + to_string(l),
                        "numerator replaced by f - l*g = " + to_string(*out.shifted_numerator));
  }
  return out;
}

std::optional<Verdict> separate(const LimitProblem& problem, Certificate* certificate) {
  const auto fterms = terms_of(problem.numerator);
  if (fterms.empty()) {
    if (certificate) certificate->add("separation", "f = 0", "numerator vanishes identically; limit 0");
    return Verdict::exists(Expr());
  }
  std::map<std::string, std::vector<Expr>> groups;
  for (const auto& t : fterms) {
    auto fv = free_variables(t);
    if (fv.size() != 1) return std::nullopt;
    groups[*fv.begin()].push_back(t);
  }
  std::map<std::string, std::vector<Expr>> gparts;
  for (const auto& t : terms_of(problem.denominator)) {
    if (!manifestly_nonnegative(t)) return std::nullopt;
    auto fv = free_variables(t);
    if (fv.size() == 1) gparts[*fv.begin()].push_back(t);
  }
  Certificate local;
  for (const auto& [x, parts] : groups) {
    if (!gparts.count(x)) return std::nullopt;
    Expr fk = Expr::add(parts);
    Expr gk = Expr::add(gparts[x]);
    auto at0 = exact_value_at(fk, {{x, Rational(0)}});
    if (!at0 || *at0 != 0) return std::nullopt;
    TwoSidedLimit tl = two_sided_limit(fk, gk, x);
    if (!tl.value || *tl.value != ExtendedValue::finite(Rational(0))) return std::nullopt;
    local.add("separation", to_string(fk) + " / " + to_string(gk),
              "|f_" + x + "|/g <= |f_" + x + "|/g_" + x + " -> 0 (numerator " + tl.right.num_series +
                  ", denominator " + tl.right.den_series + ")");
  }
  if (certificate) {
    certificate->add("separation", to_string(problem.denominator),
                     "every denominator term is nonnegative, so g >= g_k for each piece");
    certificate->append(local);
  }
  return Verdict::exists(Expr(), "separation");
}

// -- decompositions ----------------------------------------------------------

bool SquareDecomposition::monomial() const {
  return std::all_of(u.begin(), u.end(), [](const Expr& e) { return is_monomial(e); });
}

std::string to_string(SquareDecomposition::ResidualClass c) {
  switch (c) {
    case SquareDecomposition::ResidualClass::Nonnegative: return "nonnegative";
    case SquareDecomposition::ResidualClass::DegreeBounded: return "degree-bounded";
    case SquareDecomposition::ResidualClass::Unknown: return "unknown";
  }
  return "unknown";
}

std::string SquareDecomposition::describe() const {
  std::string s = "u=" + expr_list(u);
  if (std::any_of(weights.begin(), weights.end(), [](const Rational& w) { return w != 1; }))
    s += ", w=" + vector_string(weights);
  s += ", v=" + to_string(residual) + " [" + to_string(residual_class) + "]";
  return s;
}

SquareDecomposition::ResidualClass classify_residual(const Expr& v) {
  using RC = SquareDecomposition::ResidualClass;
  if (v.is_zero()) return RC::Nonnegative;
  auto terms = terms_of(v);
  if (std::all_of(terms.begin(), terms.end(), manifestly_nonnegative)) return RC::Nonnegative;
  if (as_polynomial(v)) return RC::DegreeBounded;
  return RC::Unknown;
}

SquareDecomposition make_decomposition(const Expr& g, const std::vector<Expr>& u, const std::optional<Expr>& residual) {
  SquareDecomposition d;
  d.u = u;
  d.weights.assign(u.size(), Rational(1));
  std::vector<Expr> squares;
  for (const auto& ui : u) squares.push_back(pow(ui, Rational(2)));
  Expr v = g - Expr::add(squares);
  if (auto p = as_polynomial(v)) v = to_expr(*p);
  if (residual) {
    Expr diff = v - *residual;
    auto p = as_polynomial(diff);
    if (!(diff.is_zero() || (p && p->empty())))
      throw std::invalid_argument("sum of u_i^2 plus v does not equal the denominator (difference " +
                                  to_string(diff) + ")");
    v = *residual;
  }
  d.residual = v;
  d.residual_class = classify_residual(v);
  return d;
}

std::vector<SquareDecomposition> enumerate_square_decompositions(const Expr& g, const std::vector<std::string>& vars,
                                                                 const std::optional<Expr>& numerator, size_t budget) {
  std::vector<SquareDecomposition> out;
  auto poly = as_polynomial(g);
  if (!poly) return out;
  std::vector<size_t> cand;
  for (size_t i = 0; i < poly->size(); ++i) {
    const auto& m = (*poly)[i];
    if (m.coefficient <= 0 || m.exponents.empty()) continue;
    bool even = std::all_of(m.exponents.begin(), m.exponents.end(),
                            [](const auto& kv) { return is_even_integer(kv.second); });
    if (even) cand.push_back(i);
  }
  std::optional<std::vector<Monomial>> num;
  if (numerator) num = as_polynomial(*numerator);

  struct Scored {
    SquareDecomposition dec;
    Rational score;
    size_t residual_terms;
    size_t order;
  };
  std::vector<Scored> scored;
  const size_t max_size = std::min(vars.size(), cand.size());
  for (size_t k = 2; k <= max_size; ++k) {
    std::vector<bool> pick(cand.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
    do {
      SquareDecomposition d;
      std::vector<Expr> resid;
      std::set<size_t> chosen;
      for (size_t j = 0; j < cand.size(); ++j)
        if (pick[j]) chosen.insert(cand[j]);
      for (size_t i = 0; i < poly->size(); ++i) {
        const auto& m = (*poly)[i];
        if (chosen.count(i)) {
          Monomial half{Rational(1), {}};
          for (const auto& [v, p] : m.exponents) half.exponents[v] = p / 2;
          d.u.push_back(to_expr(half));
          d.weights.push_back(m.coefficient);
        } else {
          resid.push_back(to_expr(m));
        }
      }
      d.residual = Expr::add(resid);
      d.residual_class = classify_residual(d.residual);
      Rational score = 0;
      if (num) {
        std::vector<std::vector<Rational>> w;
        for (const auto& ui : d.u) w.push_back(exponent_vector(as_polynomial(ui)->front().exponents, vars));
        std::optional<Rational> lo;
        for (const auto& term : *num) {
          Rational a = bound_term(to_expr(term), exponent_vector(term.exponents, vars), w).alpha;
          lo = lo ? std::min(*lo, a) : a;
        }
        const auto resid_poly = as_polynomial(d.residual);
        if (d.residual_class != SquareDecomposition::ResidualClass::Nonnegative && resid_poly) {
          for (const auto& term : *resid_poly) {
            Rational a = bound_term(to_expr(term), exponent_vector(term.exponents, vars), w).alpha;
            lo = lo ? std::min(*lo, a) : a;
          }
        }
        score = lo ? *lo : Rational(0);
      }
      scored.push_back({d, score, resid.size(), scored.size()});
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.residual_terms < b.residual_terms;
  });
  for (auto& s : scored) {
    if (out.size() >= budget) break;
    out.push_back(std::move(s.dec));
  }
  return out;
}

// -- curve probe -------------------------------------------------------------

CurveProbeOutcome curve_probe(const LimitProblem& problem, const SquareDecomposition& dec,
                              const std::vector<WitnessPath>& reference, std::uint64_t seed,
                              std::optional<Rational> order) {
  CurveProbeOutcome out;
  const auto& vars = problem.vars;
  const std::string tn = fresh_parameter(vars);
  const Expr t = Expr::variable(tn);
  out.probe.param_name = tn;

  std::vector<size_t> eqs;
  for (size_t i = 0; i < dec.u.size(); ++i)
    if (std::find(dec.drop.begin(), dec.drop.end(), i) == dec.drop.end()) eqs.push_back(i);
  if (eqs.size() > vars.size()) {
    out.probe.note = "overdetermined: " + std::to_string(eqs.size()) + " equations in " +
                     std::to_string(vars.size()) + " variables";
    out.certificate.add("curve-probe", dec.describe(), out.probe.note + "; probe skipped", StepStatus::ProvedExact);
    return out;
  }
  std::string why;
  auto steps = triangular_order(dec.u, eqs, vars, why);
  if (!steps) {
    out.probe.note = why;
    out.certificate.add("curve-probe", dec.describe(), why + "; probe skipped", StepStatus::ProvedExact);
    return out;
  }
  out.solvable = true;
  long root_product = 1;
  for (const auto& st : *steps) {
    out.probe.solve_order.push_back(st.var + " from u" + std::to_string(st.eq + 1));
    root_product *= st.d;
    if (st.d % 2 == 0)
      out.probe.branch_conditions.push_back(st.var + ": both signs of the even root (t > 0, m > 0)");
  }
  out.probe.branch_conditions.insert(out.probe.branch_conditions.begin(), "t > 0, m_i > 0");

  // Symbolic parameterization, for display and the m-ratio.
  std::vector<Expr> msym(dec.u.size());
  for (size_t i = 0; i < dec.u.size(); ++i) msym[i] = Expr::variable("m" + std::to_string(i + 1));
  auto sym = parameterize(*steps, vars, msym, t, false);
  if (!sym.empty()) {
    out.probe.symbolic_parameterization = sym.front().param;
    auto fp = as_polynomial(problem.numerator);
    auto gp = as_polynomial(problem.denominator);
    if (fp && gp) {
      auto nl = symbolic_lead(*fp, sym.front().param, tn);
      auto dl = symbolic_lead(*gp, sym.front().param, tn);
      if (dl && nl) {
        Expr ratio = nl->second / dl->second;
        if (nl->first != dl->first) ratio = ratio * pow(t, nl->first - dl->first);
        out.probe.ratio_as_function_of_m = ratio;
      }
    }
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> small(1, 9);
  auto powered = [&](const std::vector<Rational>& base) {
    std::vector<Rational> m;
    for (const auto& b : base) m.push_back(integer_power(b, root_product));
    return m;
  };
  std::vector<std::vector<Rational>> mvectors;
  if (dec.m.size() == eqs.size() && !dec.m.empty()) {
    std::vector<Rational> full(dec.u.size(), Rational(1));
    for (size_t q = 0; q < eqs.size(); ++q) full[eqs[q]] = dec.m[q];
    mvectors.push_back(full);
  }
  auto add_vector = [&](std::vector<Rational> m) {
    if (std::find(mvectors.begin(), mvectors.end(), m) == mvectors.end()) mvectors.push_back(std::move(m));
  };
  add_vector(std::vector<Rational>(dec.u.size(), Rational(1)));
  {
    std::vector<Rational> b;
    for (size_t i = 0; i < dec.u.size(); ++i) b.push_back(Rational(static_cast<long>(i + 1)));
    add_vector(powered(b));
  }

  auto run = [&](const std::vector<Rational>& m) {
    std::vector<Expr> mv;
    for (const auto& q : m) mv.push_back(Expr::constant(q));
    for (auto& br : parameterize(*steps, vars, mv, t, true)) {
      CurveBranch cb;
      cb.m = m;
      cb.sigma = br.sigma;
      cb.param = br.param;
      Rational L = rescale(cb.param, tn);
      out.probe.rescale = L;
      bool sound = true;
      bool into_point = true;
      for (const auto& [v, e] : cb.param) {
        try {
          auto val = expand_with_cap(e, tn, Rational(8)).valuation();
          if (val && *val <= 0) into_point = false;
        } catch (const SeriesError&) {
          into_point = false;
        }
      }
      if (!into_point) {
        out.certificate.add("curve-probe", describe_param(cb.param), "branch does not tend to the point; discarded");
        continue;
      }
      for (size_t i : eqs) {
        Expr diff = substitute(dec.u[i], cb.param) - Expr::constant(m[i]) * pow(t, L);
        try {
          if (!expand_with_cap(diff, tn, Rational(64)).is_zero()) sound = false;
        } catch (const SeriesError&) {
          sound = false;
        }
      }
      std::vector<Rational> mk;
      for (size_t i : eqs) mk.push_back(m[i]);
      std::string sg = sigma_string(cb.sigma);
      cb.label = "m=" + vector_string(mk) + (sg.empty() ? "" : ", sign " + sg);
      OneSidedLimit lim = limit_at_zero_plus(substitute(problem.numerator, cb.param),
                                             substitute(problem.denominator, cb.param), tn, order);
      cb.value = lim.value;
      cb.detail = lim.value ? "numerator " + lim.num_series + ", denominator " + lim.den_series : lim.reason;
      std::string claim = describe_param(cb.param) + ": " +
                          (lim.value ? "restricted limit " + lim.value->to_string() : "undecided: " + lim.reason);
      if (!sound) claim += " (u_i = m_i t identity not verified)";
      out.certificate.add("curve-probe", cb.label + (L != 1 ? ", t -> t^" + to_string(L) : ""), claim,
                          lim.value && sound ? StepStatus::ProvedExact : StepStatus::Assumed);
      if (!sound) cb.value.reset();
      out.probe.branches.push_back(std::move(cb));
    }
  };
  for (const auto& m : mvectors) run(m);

  auto curve_paths = [&] {
    std::vector<WitnessPath> ps;
    for (const auto& b : out.probe.branches) {
      if (!b.value) continue;
      ps.push_back({"curve " + b.label, b.param, *b.value});
    }
    return ps;
  };
  std::vector<WitnessPath> paths = curve_paths();
  if (!paths.empty() && widest_gap(paths) == 0 && !any_infinite(paths)) {
    std::vector<Rational> b;
    for (size_t i = 0; i < dec.u.size(); ++i) b.push_back(Rational(small(rng), small(rng)));
    run(powered(b));
    paths = curve_paths();
  }
  if (paths.empty()) {
    out.probe.note = "no branch produced a restricted limit";
    return out;
  }
  std::vector<WitnessPath> all = reference;
  all.insert(all.end(), paths.begin(), paths.end());
  auto pair = widest_pair(all);
  const double gap = widest_gap(all);
  if (gap > 0 || any_infinite(paths)) {
    std::vector<WitnessPath> w;
    if (pair) w = {all[pair->first], all[pair->second]};
    else w = {paths.front()};
    std::string why = gap > 0 ? "restricted limits differ: " + w.front().value.to_string() + " vs " +
                                     w.back().value.to_string()
                              : "restricted limit is unbounded";
    if (out.probe.ratio_as_function_of_m) why += "; ratio " + to_string(*out.probe.ratio_as_function_of_m);
    out.verdict = Verdict::does_not_exist(w, why);
    out.certificate.add("curve-probe", dec.describe(), "limit does not exist: " + why);
    return out;
  }
  out.probe.note = "every restricted limit equals " + paths.front().value.to_string();
  out.certificate.add("curve-probe", dec.describe(), out.probe.note + "; no contradiction found",
                      StepStatus::ProvedExact);
  return out;
}

// -- polar degree bound ------------------------------------------------------

std::string PolarBoundCertificate::describe() const {
  std::vector<std::string> parts;
  for (const auto& tb : terms)
    parts.push_back(to_string(tb.term) + ": c=" + vector_string(tb.c) + ", alpha=" + to_string(tb.alpha));
  std::string s = "u=" + expr_list(u) + "; " + join(parts, "; ");
  if (!terms.empty()) s += "; alpha_min=" + to_string(alpha_min);
  if (residual == ResidualHandling::DroppedNonnegative) s += "; residual nonnegative, dropped";
  if (residual == ResidualHandling::DegreeBound && alpha_v) s += "; residual alpha_v=" + to_string(*alpha_v);
  return s;
}

bool replay(const PolarBoundCertificate& cert, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  auto check = [&](const TermBound& tb) -> std::optional<std::string> {
    if (tb.c.size() != cert.u_exponents.size()) return "wrong number of weights for " + to_string(tb.term);
    Rational sum = 0;
    for (const auto& c : tb.c) {
      if (c < 0) return "negative weight for " + to_string(tb.term);
      sum += c;
    }
    if (sum != tb.alpha) return "weights do not sum to alpha for " + to_string(tb.term);
    for (size_t j = 0; j < cert.vars.size(); ++j) {
      Rational used = 0;
      for (size_t i = 0; i < tb.c.size(); ++i) used += tb.c[i] * cert.u_exponents[i][j];
      if (used > tb.exponents[j]) return "constraint violated in " + cert.vars[j] + " for " + to_string(tb.term);
      if (tb.leftover[j] != tb.exponents[j] - used) return "leftover mismatch for " + to_string(tb.term);
    }
    if (tb.alpha <= 2) return "alpha = " + to_string(tb.alpha) + " <= 2 for " + to_string(tb.term);
    return std::nullopt;
  };
  std::optional<Rational> lo;
  for (const auto& tb : cert.terms) {
    if (auto m = check(tb)) return fail(*m);
    lo = lo ? std::min(*lo, tb.alpha) : tb.alpha;
  }
  if (lo && *lo != cert.alpha_min) return fail("alpha_min is not the minimum");
  if (cert.residual == PolarBoundCertificate::ResidualHandling::DegreeBound) {
    std::optional<Rational> lv;
    for (const auto& tb : cert.residual_terms) {
      if (auto m = check(tb)) return fail("residual: " + *m);
      lv = lv ? std::min(*lv, tb.alpha) : tb.alpha;
    }
    if (!cert.alpha_v || (lv && *lv != *cert.alpha_v) || *cert.alpha_v <= 2) return fail("residual bound invalid");
  } else if (cert.residual == PolarBoundCertificate::ResidualHandling::None) {
    return fail("residual not handled");
  }
  return true;
}

PolarBoundOutcome polar_degree_bound(const LimitProblem& problem, const SquareDecomposition& dec) {
  PolarBoundOutcome out;
  auto& c = out.certificate;
  c.vars = problem.vars;
  c.u = dec.u;
  if (!dec.monomial()) {
    c.reason = "non-monomial u";
    return out;
  }
  for (const auto& ui : dec.u) c.u_exponents.push_back(exponent_vector(as_polynomial(ui)->front().exponents, c.vars));
  auto num = as_polynomial(problem.numerator);
  if (!num) {
    c.reason = "numerator is not polynomial";
    return out;
  }
  for (const auto& term : *num) {
    c.terms.push_back(bound_term(to_expr(term), exponent_vector(term.exponents, c.vars), c.u_exponents));
    const auto& tb = c.terms.back();
    std::vector<std::string> left;
    for (size_t j = 0; j < c.vars.size(); ++j)
      if (tb.leftover[j] != 0) left.push_back(c.vars[j] + "^" + to_string(tb.leftover[j]));
    c.bounded_factors.push_back(to_string(tb.term) + ": |h_i| <= 1" +
                                (left.empty() ? std::string() : ", " + join(left, "*") + " bounded near 0"));
  }
  if (!c.terms.empty()) {
    c.alpha_min = c.terms.front().alpha;
    for (const auto& tb : c.terms) c.alpha_min = std::min(c.alpha_min, tb.alpha);
  }
  switch (dec.residual_class) {
    case SquareDecomposition::ResidualClass::Nonnegative:
      c.residual = PolarBoundCertificate::ResidualHandling::DroppedNonnegative;
      break;
    case SquareDecomposition::ResidualClass::DegreeBounded: {
      c.residual = PolarBoundCertificate::ResidualHandling::DegreeBound;
      const auto resid_poly = as_polynomial(dec.residual);
      for (const auto& term : *resid_poly)
        c.residual_terms.push_back(bound_term(to_expr(term), exponent_vector(term.exponents, c.vars), c.u_exponents));
      for (const auto& tb : c.residual_terms) c.alpha_v = c.alpha_v ? std::min(*c.alpha_v, tb.alpha) : tb.alpha;
      break;
    }
    case SquareDecomposition::ResidualClass::Unknown:
      c.reason = "residual " + to_string(dec.residual) + " cannot be bounded";
      return out;
  }
  if (!c.terms.empty() && c.alpha_min <= 2) {
    c.reason = "α = " + to_string(c.alpha_min) + " ≤ 2";
    return out;
  }
  if (c.alpha_v && *c.alpha_v <= 2) {
    c.reason = "residual has mixed sign and alpha_v = " + to_string(*c.alpha_v) + " <= 2";
    return out;
  }
  c.accepted = true;
  out.verdict = Verdict::exists(Expr(), "polar degree bound");
  return out;
}

// -- Taylor replacement ------------------------------------------------------

TaylorReplaceResult taylor_replace(const LimitProblem& problem) {
  TaylorReplaceResult out;
  out.problem = problem;
  std::set<std::string> singular;

  if (!as_polynomial(problem.numerator)) {
    if (auto a = taylor_leading(problem.numerator)) {
      out.problem.numerator = a->leading;
      out.certificate.add("taylor-replace", to_string(a->original),
                          "f~ = " + to_string(a->leading) + ", lim f~/f = 1 (" + a->justification + ")");
      singular.insert(a->singular_vars.begin(), a->singular_vars.end());
      out.approximations.push_back(*a);
    }
  }

  if (!as_polynomial(problem.denominator)) {
    std::vector<Expr> poly, other;
    for (const auto& t : terms_of(problem.denominator)) (as_polynomial(t) ? poly : other).push_back(t);
    Expr g1 = Expr::add(poly);
    std::vector<SeriesApprox> approx;
    std::vector<PolarBoundCertificate> obligations;
    Certificate local;
    bool ok = !poly.empty();
    for (const auto& term : other) {
      if (!ok) break;
      auto a = taylor_leading(term);
      if (!a) {
        ok = false;
        break;
      }
      LimitProblem ob{a->leading, g1, problem.vars, problem.point};
      bool discharged = false;
      for (const auto& dec : enumerate_square_decompositions(g1, problem.vars, a->leading)) {
        PolarBoundOutcome pb = polar_degree_bound(ob, dec);
        if (!pb.verdict) continue;
        local.add("taylor-replace", to_string(term),
                  "g~ = " + to_string(a->leading) + ", lim g~/g = 1 (" + a->justification + ")");
        local.add("polar-bound", to_string(a->leading) + " / (" + to_string(g1) + ")",
                  "lim g~/g_1 = 0: " + pb.certificate.describe());
        obligations.push_back(pb.certificate);
        discharged = true;
        break;
      }
      if (!discharged) {
        ok = false;
        break;
      }
      approx.push_back(*a);
    }
    if (ok) {
      out.problem.denominator = g1;
      out.certificate.append(local);
      out.certificate.add("taylor-replace", to_string(problem.denominator),
                          "dominant part g_1 = " + to_string(g1) + "; lim h = lim f/g_1 since (g_1 + g_2)/g_1 -> 1");
      for (const auto& a : approx) singular.insert(a.singular_vars.begin(), a.singular_vars.end());
      out.approximations.insert(out.approximations.end(), approx.begin(), approx.end());
      out.obligations = std::move(obligations);
    }
  }
  out.changed = out.problem.numerator != problem.numerator || out.problem.denominator != problem.denominator;
  if (out.changed) out.singular_vars.assign(singular.begin(), singular.end());
  return out;
}

// -- orchestration -----------------------------------------------------------

Resolution resolve_isolated(const LimitProblem& problem, const IsolatedOptions& options) {
  problem.validate();
  Resolution res;
  Certificate& cert = res.certificate;
  LimitProblem work = translated_to_origin(problem);
  if (!problem.at_origin()) cert.add("translate", "p=" + describe_param([&] {
    std::map<std::string, Expr> m;
    for (const auto& [v, c] : problem.point) m[v] = Expr::constant(c);
    return m;
  }()), "moved to the origin: f=" + to_string(work.numerator) + ", g=" + to_string(work.denominator));

  if (work.numerator.is_zero()) {
    cert.add("separation", "f = 0", "numerator vanishes identically; limit 0");
    res.verdict = Verdict::exists(Expr());
    return res;
  }

  PreliminaryProbeResult pre = preliminary_probe(work);
  cert.append(pre.certificate);
  if (pre.verdict) {
    std::vector<WitnessPath> w;
    for (const auto& p : pre.verdict->witnesses) w.push_back(untranslate(p, problem, Rational(0)));
    res.verdict = Verdict::does_not_exist(w, pre.verdict->reason);
    return res;
  }
  const Rational shift = pre.shift ? *pre.shift : Rational(0);
  if (pre.shifted_numerator) work.numerator = *pre.shifted_numerator;
  std::vector<WitnessPath> refs = pre.witnesses();
  for (auto& r : refs)
    if (r.value.is_finite()) r.value.value -= shift;

  if (work.vars.size() == 1) {
    const auto& ax = pre.restricted_limits.front();
    if (ax.verdict.kind == Verdict::Kind::Exists) {
      res.verdict = Verdict::exists(ax.verdict.value, "single variable");
    } else {
      res.verdict = Verdict::inconclusive(ax.verdict.reason);
    }
    return res;
  }
  if (work.numerator.is_zero()) {
    cert.add("axis-probe", "f - l*g = 0", "shifted numerator vanishes identically; limit l");
    res.verdict = Verdict::exists(Expr::constant(shift));
    return res;
  }

  if (auto v = separate(work, &cert)) {
    res.verdict = Verdict::exists(Expr::constant(shift), "separation");
    return res;
  }

  TaylorReplaceResult tr = taylor_replace(work);
  cert.append(tr.certificate);
  const LimitProblem& target = tr.problem;

  std::vector<SquareDecomposition> decs;
  std::vector<std::string> attempts;
  for (const auto& h : options.hints) {
    try {
      SquareDecomposition d = make_decomposition(target.denominator, h.u,
                                                   h.residual.is_zero() ? std::nullopt : std::optional<Expr>(h.residual));
      d.drop = h.drop;
      d.m = h.m;
      decs.push_back(std::move(d));
    } catch (const std::invalid_argument& e) {
      cert.add("square-decomposition", h.describe(), std::string("hint rejected: ") + e.what());
      attempts.push_back("hint rejected");
    }
  }
  if (decs.size() < options.max_decompositions) {
    for (auto& d : enumerate_square_decompositions(target.denominator, target.vars, target.numerator,
                                                   options.max_decompositions - decs.size()))
      decs.push_back(std::move(d));
  }
  if (decs.empty()) {
    cert.add("square-decomposition", to_string(target.denominator), "no square decomposition available");
    res.verdict = Verdict::inconclusive("no square decomposition of the denominator");
    return res;
  }

  for (const auto& dec : decs) {
    cert.add("square-decomposition", to_string(target.denominator),
             "g = sum w_i u_i^2 + v with " + dec.describe() + " (identity checked exactly)");
    CurveProbeOutcome cp = curve_probe(target, dec, refs, options.seed, options.order);
    cert.append(cp.certificate);
    if (cp.verdict) {
      std::vector<WitnessPath> w;
      bool confirmed = true;
      for (auto p : cp.verdict->witnesses) {
        if (tr.changed) {
          const std::string tn = fresh_parameter(work.vars);
          OneSidedLimit check = limit_at_zero_plus(substitute(work.numerator, p.param),
                                                   substitute(work.denominator, p.param), tn, options.order);
          if (!check.value) confirmed = false;
          else p.value = *check.value;
        }
        w.push_back(untranslate(p, problem, shift));
      }
      if (confirmed && w.size() == 2 && value_gap(w[0].value, w[1].value) > 0) {
        res.verdict = Verdict::does_not_exist(w, cp.verdict->reason);
        return res;
      }
      if (confirmed && w.size() >= 1 && any_infinite(w)) {
        res.verdict = Verdict::does_not_exist(w, cp.verdict->reason);
        return res;
      }
      attempts.push_back(dec.describe() + ": witnesses not confirmed on the original quotient");
      continue;
    }
    PolarBoundOutcome pb = polar_degree_bound(target, dec);
    if (!pb.verdict) {
      cert.add("polar-bound", dec.describe(), "rejected: " + pb.certificate.reason +
                                                  (pb.certificate.terms.empty() ? "" : " (" + pb.certificate.describe() + ")"));
      attempts.push_back(dec.describe() + ": " + pb.certificate.reason);
      continue;
    }
    cert.add("polar-bound", dec.describe(), "|f|/g <= C rho^(alpha_min - 2) -> 0: " + pb.certificate.describe());

    bool discharged = true;
    for (const auto& x : tr.singular_vars) {
      std::map<std::string, Expr> zero{{x, Expr()}};
      LimitProblem r;
      r.numerator = substitute(work.numerator, zero);
      r.denominator = substitute(work.denominator, zero);
      for (const auto& v : work.vars)
        if (v != x) {
          r.vars.push_back(v);
          r.point[v] = 0;
        }
      if (r.denominator.is_zero()) {
        cert.add("taylor-replace", x + "=0", "outside the domain of h (g vanishes there)");
        continue;
      }
      if (r.numerator.is_zero()) {
        cert.add("taylor-replace", x + "=0", "restricted numerator vanishes; restricted limit 0");
        continue;
      }
      if (options.depth >= 2 || r.vars.empty()) {
        discharged = false;
        break;
      }
      IsolatedOptions sub = options;
      sub.hints.clear();
      sub.depth = options.depth + 1;
      Resolution rr = resolve_isolated(r, sub);
      auto rv = rr.verdict.rational_value();
      if (rr.verdict.kind == Verdict::Kind::Exists && rv && *rv == 0) {
        cert.add("taylor-replace", x + "=0", "restricted limit 0 by recursive resolution");
        continue;
      }
      discharged = false;
      break;
    }
    if (!discharged) {
      attempts.push_back(dec.describe() + ": domain restriction not discharged");
      continue;
    }
    res.verdict = Verdict::exists(Expr::constant(shift), "polar degree bound");
    return res;
  }
  res.verdict = Verdict::inconclusive("no decomposition was conclusive: " + join(attempts, "; "));
  return res;
}

}  // namespace mvlim

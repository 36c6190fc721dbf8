#pragma once

#include "mvlim/expr.hpp"
#include "mvlim/isolated.hpp"
#include "mvlim/resolver.hpp"
#include "mvlim/series.hpp"
#include "mvlim/verdict.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mvlim::testing {

// Reference problems with their known verdicts.
struct Golden {
  std::string name;
  std::string numerator;
  std::string denominator;
  std::vector<std::string> vars;
  Verdict::Kind kind;
  std::optional<Rational> value;  // Exists only
  std::vector<std::string> hint_u;  // user decomposition, if any
  std::vector<size_t> hint_drop;
  std::vector<Rational> hint_m;
};

const std::vector<Golden>& goldens();
LimitProblem problem_of(const Golden& g);
ResolveOptions options_of(const Golden& g, const LimitProblem& p);

// Expression trees built outside the canonicalizer, with their own
// double evaluator, used as an oracle for parse/canonical form/evaluate.
struct RawExpr {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Func };
  Op op = Op::Const;
  Rational value;         // Const; Pow exponent
  std::string name;       // Var
  Function function = Function::Sin;
  std::vector<std::shared_ptr<RawExpr>> kids;

  std::optional<double> eval(const std::map<std::string, double>& at) const;
  Expr build() const;          // through the Expr constructors
  std::string text() const;    // fully parenthesized input text
};

using Rng = std::mt19937_64;

Rational random_rational(Rng& rng, long max_num, long max_den);

/// Random multivariate expression over the full function set. Function
/// arguments are shaped so that tan/sec stay away from their poles and sqrt
/// from negative arguments; abs may still see either sign.
std::shared_ptr<RawExpr> random_raw(Rng& rng, const std::vector<std::string>& vars, int depth);

/// Random univariate composition in t whose Puiseux expansion at 0+ has
/// rational coefficients: functions applied to sums of powers of t that
/// vanish at 0, nested up to two levels, combined by + and *.
Expr random_univariate(Rng& rng, const std::string& t);

/// Least-squares slope of log|e(t) - series(t)| against log t over
/// t = 2^-4 .. 2^-20, in 600-digit arithmetic. `exact` when the error
/// vanishes at every sample.
/// Log-log slope of the truncation error over t = 2^-4..2^-20. `slope` fits the
/// envelope max_{s <= t} |err(s)|, the tightest sampled bound of the form C t^order;
/// `raw_slope` fits |err| itself and dips where the error changes sign.
struct SlopeFit {
  bool exact = false;
  double slope = 0;
  double raw_slope = 0;
};
SlopeFit fit_series_error(const Expr& e, const PuiseuxSeries& series, const std::string& t);

/// max sum c subject to sum_i c_i w_i <= e, c >= 0, by enumerating every
/// basic solution of the constraint system. nullopt when unbounded.
std::optional<Rational> brute_force_lp(const std::vector<std::vector<Rational>>& w, const std::vector<Rational>& e);

}  // namespace mvlim::testing

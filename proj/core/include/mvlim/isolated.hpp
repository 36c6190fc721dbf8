#pragma once

#include "mvlim/limits.hpp"
#include "mvlim/polynomial.hpp"
#include "mvlim/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

// Resolver for a singular point that is isolated in the zero set of the
// denominator. Stage functions take a problem already translated to the
// origin; resolve_isolated() does the translation.

struct AxisRestriction {
  std::string var;
  bool skipped = false;  // the denominator vanishes on the whole axis
  std::string note;
  Verdict verdict;                  // two-sided restricted limit
  std::vector<WitnessPath> sides;   // x -> 0+ and x -> 0-, when decided
};

struct PreliminaryProbeResult {
  std::vector<AxisRestriction> restricted_limits;
  std::optional<Rational> shift;           // l when every axis gives the same l != 0
  std::optional<Expr> shifted_numerator;   // f - l*g
  std::optional<Verdict> verdict;          // DoesNotExist when restrictions disagree
  Certificate certificate;

  /// Axis paths with decided values, in the coordinates of the probe.
  std::vector<WitnessPath> witnesses() const;
};

PreliminaryProbeResult preliminary_probe(const LimitProblem& problem);

/// Bounds |f_k|/g by |f_k|/g_k for a numerator split by variable support.
/// Exists(0) when every piece certifies 0; nullopt otherwise.
std::optional<Verdict> separate(const LimitProblem& problem, Certificate* certificate = nullptr);

/// g = sum_i w_i u_i^2 + v, w_i > 0.
struct SquareDecomposition {
  enum class ResidualClass { Nonnegative, DegreeBounded, Unknown };

  std::vector<Expr> u;
  std::vector<Rational> weights;
  Expr residual;
  ResidualClass residual_class = ResidualClass::Unknown;
  /// Curve-probe overrides: 0-based indices of u left out, and m values.
  std::vector<size_t> drop;
  std::vector<Rational> m;

  bool monomial() const;
  std::string describe() const;
};

std::string to_string(SquareDecomposition::ResidualClass c);

/// Builds a decomposition from user-supplied u (weights 1), computing
/// v = g - sum u_i^2. When `residual` is given it must match exactly.
/// Throws std::invalid_argument on mismatch.
SquareDecomposition make_decomposition(const Expr& g, const std::vector<Expr>& u,
                                       const std::optional<Expr>& residual = std::nullopt);

/// Classifies v: nonnegative when it is zero or every term has a positive
/// coefficient and even exponents; degree-bounded when polynomial.
SquareDecomposition::ResidualClass classify_residual(const Expr& v);

/// Monomial square decompositions read off the terms of g, with 2..n
/// squares for n variables. With a numerator, candidates are ordered by
/// their polar degree potential (largest minimum LP optimum first), then by
/// fewer residual terms. `budget` caps the list.
std::vector<SquareDecomposition> enumerate_square_decompositions(const Expr& g, const std::vector<std::string>& vars,
                                                                 const std::optional<Expr>& numerator = std::nullopt,
                                                                 size_t budget = 16);

struct CurveBranch {
  std::string label;
  std::vector<Rational> m;
  std::vector<int> sigma;  // per solved variable: +1, -1, or 0 for odd roots
  std::map<std::string, Expr> param;
  std::optional<ExtendedValue> value;
  std::string detail;
};

struct CurveProbe {
  std::string param_name;
  Rational rescale{1};  // t was replaced by t^rescale
  std::vector<std::string> solve_order;
  std::map<std::string, Expr> symbolic_parameterization;  // in t and m1..mk
  std::vector<std::string> branch_conditions;
  std::vector<CurveBranch> branches;
  std::optional<Expr> ratio_as_function_of_m;
  std::string note;
};

struct CurveProbeOutcome {
  bool solvable = false;
  std::optional<Verdict> verdict;  // DoesNotExist, or nullopt to continue
  CurveProbe probe;
  Certificate certificate;
};

/// Substitutes u_i = m_i t, solved triangularly, for several m and every
/// sign branch. `reference` paths (the axis restrictions) take part in the
/// comparison. DoesNotExist carries the two paths with the largest gap.
CurveProbeOutcome curve_probe(const LimitProblem& problem, const SquareDecomposition& dec,
                              const std::vector<WitnessPath>& reference = {}, std::uint64_t seed = 0,
                              std::optional<Rational> order = std::nullopt);

struct TermBound {
  Expr term;
  std::vector<Rational> exponents;  // over PolarBoundCertificate::vars
  std::vector<Rational> c;
  Rational alpha;
  std::vector<Rational> leftover;
};

struct PolarBoundCertificate {
  enum class ResidualHandling { None, DroppedNonnegative, DegreeBound };

  std::vector<std::string> vars;
  std::vector<Expr> u;
  std::vector<std::vector<Rational>> u_exponents;
  std::vector<TermBound> terms;
  Rational alpha_min;
  ResidualHandling residual = ResidualHandling::None;
  std::vector<TermBound> residual_terms;
  std::optional<Rational> alpha_v;
  std::vector<std::string> bounded_factors;
  bool accepted = false;
  std::string reason;

  std::string describe() const;
};

/// Exact replay: c >= 0, sum_i c_i w_i <= e, sum c = alpha, leftover
/// consistent, every alpha > 2 (numerator and degree-bounded residual).
bool replay(const PolarBoundCertificate& cert, std::string* why = nullptr);

struct PolarBoundOutcome {
  std::optional<Verdict> verdict;  // Exists(0) when accepted
  PolarBoundCertificate certificate;
};

/// Per numerator monomial e: maximize sum c_i with sum c_i w_i <= e, c >= 0.
PolarBoundOutcome polar_degree_bound(const LimitProblem& problem, const SquareDecomposition& dec);

struct TaylorReplaceResult {
  LimitProblem problem;  // rewritten
  bool changed = false;
  std::vector<SeriesApprox> approximations;
  std::vector<PolarBoundCertificate> obligations;  // g~_k / g_1 -> 0
  std::vector<std::string> singular_vars;         // restrictions x_j = 0 to discharge
  Certificate certificate;
};

/// Replaces a non-polynomial numerator by its leading form, and drops
/// non-polynomial denominator terms whose leading forms are dominated by
/// the polynomial part. Identity rewrite when nothing matches.
TaylorReplaceResult taylor_replace(const LimitProblem& problem);

struct IsolatedOptions {
  std::vector<SquareDecomposition> hints;  // in translated coordinates
  size_t max_decompositions = 16;
  std::optional<Rational> order;
  std::uint64_t seed = 0;
  int depth = 0;
};

Resolution resolve_isolated(const LimitProblem& problem, const IsolatedOptions& options = {});

/// The problem moved to the origin (x -> x + p).
LimitProblem translated_to_origin(const LimitProblem& problem);

/// Every factor is an even power, abs, sqrt or exp, with positive coefficient.
bool manifestly_nonnegative(const Expr& term);

}  // namespace mvlim

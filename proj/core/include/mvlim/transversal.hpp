#pragma once

#include "mvlim/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

// Resolver for a singular point lying on a curve (or surface) C of zeros of
// the denominator: per component of the punctured neighborhood minus C, the
// quotient of directional derivatives along a direction transverse to C.
// Points, seeds and membership predicates use the original coordinates.

/// One piece of C: a parameterization in `param_name` through p at 0, or an
/// implicit equation phi = 0.
struct CurveSpec {
  std::map<std::string, Expr> param;  // empty for implicit curves
  std::string param_name = "s";
  std::optional<Expr> implicit;

  bool is_implicit() const { return implicit.has_value(); }
  std::string describe() const;
};

struct SignCondition {
  Expr expr;
  int sign = 1;  // +1: expr > 0, -1: expr < 0
};

struct ComponentSpec {
  std::string id;
  std::vector<Rational> direction;  // empty: choose automatically
  std::vector<SignCondition> where;
  std::vector<Point> seeds;

  bool contains(const std::map<std::string, double>& x) const;
};

struct ZeroSetSpec {
  std::vector<CurveSpec> curves;
  std::vector<ComponentSpec> components;  // empty: sign cells of the curves
};

struct TransversalityResult {
  bool transversal = false;
  bool degenerate = false;  // zero tangent or gradient at p
  std::string detail;
  Certificate certificate;
};

TransversalityResult check_transversality(const ZeroSetSpec& spec, const std::vector<Rational>& v,
                                          const std::vector<std::string>& vars, const Point& p);

struct FalsifyResult {
  std::optional<std::vector<double>> counterexample;
  bool symbolic_zero = false;      // D_v g is identically zero
  bool proved_nonzero = false;     // D_v g(p) != 0 exactly
  bool empty_component = false;
  int samples_in_component = 0;
  std::vector<std::map<std::string, double>> members;  // first in-component samples
  std::string detail;
};

/// Looks for a point of the component within `radius` of p where D_v g
/// vanishes: an exact symbolic zero, |D_v g| < 1e-12 at a quasi-random
/// sample, or a sign change located by bisection.
FalsifyResult falsify_nonvanishing(const Expr& g, const std::vector<std::string>& vars, const std::vector<Rational>& v,
                                   const ComponentSpec& component, const Point& p, const Rational& radius = Rational(1, 4),
                                   int samples = 4096);

/// Recognizes g = c*(phi(a) - phi(b)) for phi in sin, tan, exp (curve a = b)
/// and cos, sec (curves a = b and a = -b), with a - b vanishing at p.
std::optional<ZeroSetSpec> detect_zero_set(const LimitProblem& problem);

/// Quasi-random points in the ball of radius r around p, Halton sequence.
std::vector<std::map<std::string, double>> ball_samples(const std::vector<std::string>& vars, const Point& p,
                                                        const Rational& radius, int count, bool punctured = true);

struct TransversalOptions {
  Rational radius{1, 4};
  int samples = 4096;
  std::optional<Rational> order;
  std::uint64_t seed = 0;
  int depth = 0;
};

struct ComponentResult {
  std::string id;
  std::vector<Rational> direction;
  Expr quotient_num;
  Expr quotient_den;
  Verdict verdict;
  std::optional<Point> sample;  // a rational point of the component
};

struct NonisolatedResolution {
  Resolution resolution;
  std::vector<ComponentResult> components;
};

NonisolatedResolution resolve_nonisolated_detailed(const LimitProblem& problem, const ZeroSetSpec& spec,
                                                   const TransversalOptions& options = {});

Resolution resolve_nonisolated(const LimitProblem& problem, const ZeroSetSpec& spec,
                               const TransversalOptions& options = {});

}  // namespace mvlim

#pragma once

#include "mvlim/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

/// A limit value: a finite real or a signed infinity.
struct ExtendedValue {
  enum class Kind { Finite, PlusInfinity, MinusInfinity };
  Kind kind = Kind::Finite;
  Rational value;

  static ExtendedValue finite(const Rational& v) { return {Kind::Finite, v}; }
  static ExtendedValue plus_infinity() { return {Kind::PlusInfinity, Rational(0)}; }
  static ExtendedValue minus_infinity() { return {Kind::MinusInfinity, Rational(0)}; }

  bool is_finite() const { return kind == Kind::Finite; }
  std::string to_string() const;
  friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
  }
  friend bool operator!=(const ExtendedValue& a, const ExtendedValue& b) { return !(a == b); }
};

/// Distance used to rank witness pairs; infinite when exactly one side is
/// unbounded or the infinities have opposite signs.
double value_gap(const ExtendedValue& a, const ExtendedValue& b);

enum class StepStatus { ProvedExact, CheckedNumerically, Assumed };

std::string to_string(StepStatus s);

struct CertificateStep {
  std::string id;
  std::string rule;    // e.g. "axis-probe", "polar-bound"
  std::string inputs;  // rendered inputs
  std::string claim;
  StepStatus status = StepStatus::ProvedExact;
};

struct Certificate {
  std::vector<CertificateStep> steps;

  void add(std::string rule, std::string inputs, std::string claim, StepStatus status = StepStatus::ProvedExact);
  void append(const Certificate& other);
  bool has_proved_exact() const;
};

/// A curve t -> x(t) into the point, t -> 0+, with its restricted limit.
struct WitnessPath {
  std::string label;
  std::map<std::string, Expr> param;  // variable -> expression in t
  ExtendedValue value;

  /// "x=t^3, y=t^12 + t^9 - t^8, z=t^4"
  std::string describe() const;
};

struct Verdict {
  enum class Kind { Exists, DoesNotExist, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Expr value;  // Exists only; a constant expression
  std::vector<WitnessPath> witnesses;  // DoesNotExist only
  std::string reason;

  static Verdict exists(Expr value, std::string reason = {});
  static Verdict does_not_exist(std::vector<WitnessPath> witnesses, std::string reason);
  static Verdict inconclusive(std::string reason);

  bool conclusive() const { return kind != Kind::Inconclusive; }
  /// The value as a rational when it folds to one.
  std::optional<Rational> rational_value() const;
};

std::string to_string(Verdict::Kind k);

struct Resolution {
  Verdict verdict;
  Certificate certificate;
};

/// lim f/g as the variables approach `point`.
struct LimitProblem {
  Expr numerator;
  Expr denominator;
  std::vector<std::string> vars;
  Point point;

  /// Checks that every free variable of f and g is listed and that the
  /// point has exactly one coordinate per variable. Throws
  /// std::invalid_argument.
  void validate() const;
  bool at_origin() const;
};

}  // namespace mvlim

#pragma once

#include "mvlim/series.hpp"
#include "mvlim/verdict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvlim {

/// A parameter name not in `taken`: "t", then "s", "tau", "t0", "t1", ...
std::string fresh_parameter(const std::vector<std::string>& taken);

/// lim num/den as t -> 0+, decided by leading Puiseux terms.
struct OneSidedLimit {
  std::optional<ExtendedValue> value;  // nullopt: undecided, see reason
  std::string reason;
  std::string num_series;
  std::string den_series;
};

/// `order` is the initial truncation order for the denominator; by default
/// 2*(total degree of den) + 2, or 8 for non-polynomial input. It is
/// doubled up to four times while the denominator's leading term is hidden.
OneSidedLimit limit_at_zero_plus(const Expr& num, const Expr& den, const std::string& t,
                                 std::optional<Rational> order = std::nullopt);

struct TwoSidedLimit {
  std::optional<ExtendedValue> value;  // present when both sides agree
  OneSidedLimit right;                 // t -> 0+
  OneSidedLimit left;                  // t -> 0-, computed as t -> -t
  std::string reason;
};

TwoSidedLimit two_sided_limit(const Expr& num, const Expr& den, const std::string& t,
                              std::optional<Rational> order = std::nullopt);

/// Verdict form of the one-sided limit: Exists for a finite value,
/// DoesNotExist for an unbounded quotient, Inconclusive when expansion fails.
Verdict univariate_limit(const Expr& num, const Expr& den, const std::string& t,
                         std::optional<Rational> order = std::nullopt);

/// Replacement of e near the origin by the leading term of its expansion.
struct SeriesApprox {
  Expr original;
  Expr leading;
  Rational equivalence_ratio_limit;  // lim original/leading along the reduction; always 1
  Expr inner;                         // the reduction variable u = inner(x)
  std::string justification;
  /// Variables whose vanishing makes original/leading undefined.
  std::vector<std::string> singular_vars;
};

/// For e = M(x) * G(m(x)) with M a monomial, every function argument in G
/// equal to one monomial m with m(0) = 0, and G otherwise free of the
/// variables (unless m is a single variable): the leading form M*c*m^k where
/// c*u^k leads G(u). nullopt when e has another shape or is already
/// polynomial.
std::optional<SeriesApprox> taylor_leading(const Expr& e, int max_order = 12);

}  // namespace mvlim

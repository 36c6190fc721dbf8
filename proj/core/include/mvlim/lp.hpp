#pragma once

#include "mvlim/rational.hpp"

#include <vector>

namespace mvlim {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  std::vector<Rational> x;
  Rational value;
};

/// maximize c.x subject to A x <= b, x >= 0, in exact arithmetic.
/// Two-phase simplex with Bland's rule, so it terminates on degenerate
/// problems.
LpResult maximize(const std::vector<Rational>& c, const std::vector<std::vector<Rational>>& A,
                  const std::vector<Rational>& b);

}  // namespace mvlim

#pragma once

#include "mvlim/expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

/// Geometric sample schedule t_k = start * ratio^k, k = 0..count-1.
struct TSchedule {
  Rational start{1, 16};
  Rational ratio{1, 2};
  int count = 27;

  std::vector<Rational> values() const;
};

/// A path into the point: each variable as an expression in t, t -> 0+.
struct PathSpec {
  std::string label;
  std::map<std::string, Expr> param;
  TSchedule schedule;
};

struct PathEstimate {
  std::string label;
  std::vector<double> t;
  std::vector<std::optional<double>> values;  // nullopt: undefined sample
  int undefined = 0;
  bool rejected = false;  // more than half of the samples undefined
  bool unbounded = false;
  bool converged = false;
  double tail_spread = 0.0;
  double estimate = 0.0;  // last defined value
};

struct OracleOptions {
  int tail = 5;
  double tolerance = 1e-3;
  double unbounded_threshold = 1e6;
};

/// Two estimates agree: |a - b| <= tol * max(1, |a|, |b|).
bool close(double a, double b, double tol = 1e-3);

/// Samples num/den along the path in 600-digit arithmetic.
PathEstimate estimate_path_limit(const Expr& num, const Expr& den, const PathSpec& path,
                                 const OracleOptions& options = {});

struct EstimateReport {
  enum class Suggestion { ConvergesTo, PathDependent, Unbounded, Noisy };
  std::vector<PathEstimate> paths;
  Suggestion suggestion = Suggestion::Noisy;
  double value = 0.0;         // ConvergesTo only
  double cross_spread = 0.0;  // over converged paths
  int rejected = 0;
};

std::string to_string(EstimateReport::Suggestion s);

/// n_paths >= 8 random paths: lines, monomial curves a_j t^(q_j) and
/// quadratic curves a t + b t^2, all through `point`. Deterministic in seed.
/// Throws std::invalid_argument for n_paths < 8 and std::runtime_error when
/// every path is rejected.
EstimateReport random_path_suite(const Expr& num, const Expr& den, const std::vector<std::string>& vars,
                                 const Point& point, int n_paths, std::uint64_t seed,
                                 const OracleOptions& options = {});

/// Builds the report from given paths (also used for witness checks).
EstimateReport estimate_paths(const Expr& num, const Expr& den, const std::vector<PathSpec>& paths,
                              const OracleOptions& options = {});

/// Max over points of |D_v e - central difference| / max(|D_v e|, 1e-3),
/// step 1e-5. Points where either side is undefined are skipped.
double finite_difference_check(const Expr& e, const std::vector<std::string>& vars,
                               const std::vector<Rational>& direction,
                               const std::vector<std::vector<double>>& points);

}  // namespace mvlim

#pragma once

#include "mvlim/oracle.hpp"
#include "mvlim/resolver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

enum class Format { Text, Json };

/// A command-line request, before parsing of the expression texts.
struct Query {
  std::string command = "resolve";  // "resolve" or "probe"
  std::string numerator;
  std::string denominator;
  std::string quotient;  // --expr, alternative to numerator/denominator
  std::string vars;      // "x,y"
  std::string point;     // "0,0"; empty means the origin
  Mode mode = Mode::Auto;
  std::string zero_set_json;
  std::string decomposition_json;
  int paths = 20;
  std::uint64_t seed = 0;
  Format format = Format::Text;
  size_t max_decompositions = 16;
  std::optional<Rational> order;
};

struct RunResult {
  int exit_code = 0;  // 0 conclusive, 2 inconclusive, 1 input error
  std::string output;
  std::string error;
};

RunResult run(const Query& query);

/// Builds the problem from the query texts. Throws std::invalid_argument
/// or ParseError.
LimitProblem problem_from_query(const Query& query);

/// Splits a canonical quotient into numerator and denominator by the sign
/// of the exponents of its factors.
std::pair<Expr, Expr> split_quotient(const Expr& e);

/// {"curves":[{"param":{"x":"s"}} | {"implicit":"x-y"}],
///  "components":[{"id","direction","where":[{"expr","sign"}],"seeds"}]}
ZeroSetSpec parse_zero_set(const std::string& json, const std::vector<std::string>& vars);

/// {"u":["x^3","x*y"],"v":"y^6","drop":["u2"],"m":[1,1,1]}
SquareDecomposition parse_decomposition(const std::string& json, const Expr& denominator);

std::string render_certificate(const Certificate& c, Format format);

std::string render_verdict(const Verdict& v, const Certificate& c, const std::optional<EstimateReport>& oracle,
                           const std::vector<PathEstimate>& witness_checks, Format format);

std::string render_report(const EstimateReport& report, Format format);

/// "rational-or-decimal" rendering of an Exists value.
std::string render_value(const Expr& value);

}  // namespace mvlim

#include "mvlim/verdict.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace mvlim {

std::string ExtendedValue::to_string() const {
  switch (kind) {
    case Kind::PlusInfinity: return "+inf";
    case Kind::MinusInfinity: return "-inf";
    case Kind::Finite: break;
  }
  return mvlim::to_string(value);
}

double value_gap(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_finite() && b.is_finite()) return std::fabs(to_double(a.value - b.value));
  if (a == b) return 0.0;
  return std::numeric_limits<double>::infinity();
}

std::string to_string(StepStatus s) {
  switch (s) {
    case StepStatus::ProvedExact: return "proved-exact";
    case StepStatus::CheckedNumerically: return "checked-numerically";
    case StepStatus::Assumed: return "assumed";
  }
  return "assumed";
}

void Certificate::add(std::string rule, std::string inputs, std::string claim, StepStatus status) {
  CertificateStep step;
  step.id = "step" + std::to_string(steps.size() + 1);
  step.rule = std::move(rule);
  step.inputs = std::move(inputs);
  step.claim = std::move(claim);
  step.status = status;
  steps.push_back(std::move(step));
}

void Certificate::append(const Certificate& other) {
  for (const auto& s : other.steps) add(s.rule, s.inputs, s.claim, s.status);
}

bool Certificate::has_proved_exact() const {
  for (const auto& s : steps)
    if (s.status == StepStatus::ProvedExact) return true;
  return false;
}

std::string WitnessPath::describe() const {
  std::string out;
  for (const auto& [v, e] : param) {
    if (!out.empty()) out += ", ";
    out += v + "=" + to_string(e);
  }
  return out;
}

Verdict Verdict::exists(Expr value, std::string reason) {
  Verdict v;
  v.kind = Kind::Exists;
  v.value = std::move(value);
  v.reason = std::move(reason);
  return v;
}

Verdict Verdict::does_not_exist(std::vector<WitnessPath> witnesses, std::string reason) {
  Verdict v;
  v.kind = Kind::DoesNotExist;
  v.witnesses = std::move(witnesses);
  v.reason = std::move(reason);
  return v;
}

Verdict Verdict::inconclusive(std::string reason) {
  Verdict v;
  v.kind = Kind::Inconclusive;
  v.reason = std::move(reason);
  return v;
}

std::optional<Rational> Verdict::rational_value() const {
  if (kind == Kind::Exists && value.is_constant()) return value.value();
  return std::nullopt;
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Exists: return "exists";
    case Verdict::Kind::DoesNotExist: return "does_not_exist";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void LimitProblem::validate() const {
  std::set<std::string> listed(vars.begin(), vars.end());
  if (listed.size() != vars.size()) throw std::invalid_argument("duplicate variable in variable list");
  for (const auto& e : {numerator, denominator})
    for (const auto& v : free_variables(e))
      if (!listed.count(v)) throw std::invalid_argument("variable '" + v + "' is not in the variable list");
  if (point.size() != vars.size()) throw std::invalid_argument("point dimension does not match the variable list");
  for (const auto& v : vars)
    if (!point.count(v)) throw std::invalid_argument("point has no coordinate for '" + v + "'");
}

bool LimitProblem::at_origin() const {
  for (const auto& [v, c] : point)
    if (c != 0) return false;
  return true;
}

}  // namespace mvlim

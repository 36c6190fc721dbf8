#include "mvlim/cli.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mvlim {

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

// flags take exact rationals only
Rational exact_rational(const std::string& text) {
  if (text.find_first_of(".eE") != std::string::npos)
    throw std::invalid_argument("'" + text + "' is not an exact rational; write it as p/q");
  return parse_rational(text);
}

Rational json_rational(const json& j) {
  if (j.is_string()) return exact_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected a rational number, got " + j.dump());
}

std::string decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string witness_text(const WitnessPath& w) { return w.describe() + " -> " + w.value.to_string(); }

json certificate_json(const Certificate& c) {
  json steps = json::array();
  for (const auto& s : c.steps)
    steps.push_back({{"id", s.id}, {"rule", s.rule}, {"inputs", s.inputs}, {"claim", s.claim},
                     {"status", to_string(s.status)}});
  return steps;
}

json report_json(const EstimateReport& r) {
  json paths = json::array();
  for (const auto& p : r.paths) {
    json e = {{"label", p.label}, {"rejected", p.rejected}, {"converged", p.converged}, {"unbounded", p.unbounded}};
    if (!p.rejected) e["estimate"] = p.estimate;
    paths.push_back(std::move(e));
  }
  json out = {{"suggestion", to_string(r.suggestion)},
              {"paths", r.paths.size()},
              {"rejected", r.rejected},
              {"cross_spread", r.cross_spread},
              {"samples", std::move(paths)}};
  if (r.suggestion == EstimateReport::Suggestion::ConvergesTo) out["value"] = r.value;
  return out;
}

std::string report_text(const EstimateReport& r) {
  std::ostringstream os;
  os << "oracle: " << to_string(r.suggestion);
  if (r.suggestion == EstimateReport::Suggestion::ConvergesTo) os << " " << decimal(r.value);
  os << " (" << r.paths.size() << " paths, " << r.rejected << " rejected, spread " << decimal(r.cross_spread)
     << ")\n";
  for (const auto& p : r.paths) {
    os << "  " << p.label << ": ";
    if (p.rejected) os << "rejected";
    else if (p.unbounded) os << "unbounded (" << decimal(p.estimate) << ")";
    else os << decimal(p.estimate) << (p.converged ? "" : " (not settled)");
    os << "\n";
  }
  return os.str();
}

/// Oracle estimates of witness paths at t = 2^-10.
std::vector<PathEstimate> check_witnesses(const LimitProblem& problem, const Verdict& v) {
  std::vector<PathEstimate> out;
  if (std::find(problem.vars.begin(), problem.vars.end(), "t") != problem.vars.end()) return out;
  for (const auto& w : v.witnesses) {
    PathSpec spec;
    spec.label = w.describe();
    spec.param = w.param;
    spec.schedule.start = Rational(1, 1024);
    spec.schedule.count = 1;
    OracleOptions o;
    o.tail = 1;
    out.push_back(estimate_path_limit(problem.numerator, problem.denominator, spec, o));
  }
  return out;
}

}  // namespace

std::pair<Expr, Expr> split_quotient(const Expr& e) {
  std::vector<Expr> factors = e.kind() == Kind::Mul ? e.operands() : std::vector<Expr>{e};
  std::vector<Expr> num, den;
  for (const auto& f : factors) {
    if (f.kind() == Kind::Pow && f.exponent() < 0) den.push_back(pow(f.base(), -f.exponent()));
    else num.push_back(f);
  }
  return {Expr::mul(num), Expr::mul(den)};
}

LimitProblem problem_from_query(const Query& q) {
  LimitProblem p;
  if (!q.quotient.empty()) {
    if (!q.numerator.empty() || !q.denominator.empty())
      throw std::invalid_argument("--expr cannot be combined with --num/--den");
    auto [n, d] = split_quotient(parse(q.quotient));
    p.numerator = n;
    p.denominator = d;
  } else {
    if (q.numerator.empty() || q.denominator.empty()) throw std::invalid_argument("both --num and --den are required");
    p.numerator = parse(q.numerator);
    p.denominator = parse(q.denominator);
  }
  p.vars = split_list(q.vars);
  if (p.vars.empty()) throw std::invalid_argument("--vars is required");
  std::vector<std::string> coords = split_list(q.point);
  if (q.point.empty()) coords.assign(p.vars.size(), "0");
  if (coords.size() != p.vars.size())
    throw std::invalid_argument("point has " + std::to_string(coords.size()) + " coordinates for " +
                                std::to_string(p.vars.size()) + " variables");
  for (size_t i = 0; i < coords.size(); ++i) p.point[p.vars[i]] = exact_rational(coords[i]);
  p.validate();
  return p;
}

ZeroSetSpec parse_zero_set(const std::string& text, const std::vector<std::string>& vars) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("zero set: ") + e.what());
  }
  ZeroSetSpec spec;
  const std::set<std::string> known(vars.begin(), vars.end());
  for (const auto& c : j.value("curves", json::array())) {
    CurveSpec cs;
    if (c.contains("implicit")) {
      cs.implicit = parse(c.at("implicit").get<std::string>());
    } else if (c.contains("param")) {
      std::set<std::string> params;
      for (const auto& [v, e] : c.at("param").items()) {
        if (!known.count(v)) throw std::invalid_argument("zero set: unknown variable '" + v + "'");
        Expr x = parse(e.get<std::string>());
        for (const auto& fv : free_variables(x))
          if (!known.count(fv)) params.insert(fv);
        cs.param[v] = x;
      }
      if (params.size() > 1) throw std::invalid_argument("zero set: a curve must have one parameter");
      for (const auto& v : known)
        if (!cs.param.count(v)) throw std::invalid_argument("zero set: curve does not give '" + v + "'");
      if (!params.empty()) cs.param_name = *params.begin();
    } else {
      throw std::invalid_argument("zero set: a curve needs \"param\" or \"implicit\"");
    }
    spec.curves.push_back(std::move(cs));
  }
  int n = 0;
  for (const auto& c : j.value("components", json::array())) {
    ComponentSpec cs;
    cs.id = c.contains("id") ? (c["id"].is_string() ? c["id"].get<std::string>() : c["id"].dump())
                             : "c" + std::to_string(++n);
    for (const auto& d : c.value("direction", json::array())) cs.direction.push_back(json_rational(d));
    if (!cs.direction.empty() && cs.direction.size() != vars.size())
      throw std::invalid_argument("zero set: direction of " + cs.id + " has the wrong dimension");
    for (const auto& w : c.value("where", json::array())) {
      SignCondition sc;
      sc.expr = parse(w.at("expr").get<std::string>());
      const json& s = w.at("sign");
      if (s.is_number()) sc.sign = s.get<int>() > 0 ? 1 : -1;
      else {
        std::string t = s.get<std::string>();
        if (t == "+" || t == "positive" || t == ">0") sc.sign = 1;
        else if (t == "-" || t == "negative" || t == "<0") sc.sign = -1;
        else throw std::invalid_argument("zero set: bad sign '" + t + "'");
      }
      cs.where.push_back(std::move(sc));
    }
    for (const auto& s : c.value("seeds", json::array())) {
      if (s.size() != vars.size()) throw std::invalid_argument("zero set: seed of " + cs.id + " has the wrong dimension");
      Point pt;
      for (size_t i = 0; i < vars.size(); ++i) pt[vars[i]] = json_rational(s[i]);
      cs.seeds.push_back(std::move(pt));
    }
    spec.components.push_back(std::move(cs));
  }
  return spec;
}

SquareDecomposition parse_decomposition(const std::string& text, const Expr& denominator) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("decomposition: ") + e.what());
  }
  std::vector<Expr> u;
  for (const auto& e : j.at("u")) u.push_back(parse(e.get<std::string>()));
  std::optional<Expr> v;
  if (j.contains("v")) v = parse(j["v"].get<std::string>());
  SquareDecomposition d = make_decomposition(denominator, u, v);
  for (const auto& e : j.value("drop", json::array())) {
    long idx;
    if (e.is_number_integer()) {
      idx = e.get<long>();
    } else {
      std::string s = e.get<std::string>();
      if (!s.empty() && s[0] == 'u') s = s.substr(1);
      idx = std::stol(s);
    }
    if (idx < 1 || static_cast<size_t>(idx) > u.size()) throw std::invalid_argument("decomposition: bad drop index");
    d.drop.push_back(static_cast<size_t>(idx - 1));
  }
  for (const auto& e : j.value("m", json::array())) d.m.push_back(json_rational(e));
  return d;
}

std::string render_value(const Expr& value) {
  if (value.is_constant()) return to_string(value.value());
  auto d = evaluate<double>(value, std::map<std::string, double>{});
  return d ? decimal(*d) : to_string(value);
}

std::string render_certificate(const Certificate& c, Format format) {
  if (format == Format::Json) return certificate_json(c).dump(2);
  std::ostringstream os;
  for (size_t i = 0; i < c.steps.size(); ++i) {
    const auto& s = c.steps[i];
    os << "  " << (i + 1) << ". [" << s.rule << "] " << s.claim << "  (" << to_string(s.status) << ")\n";
    if (!s.inputs.empty()) os << "     on " << s.inputs << "\n";
  }
  return os.str();
}

std::string render_report(const EstimateReport& report, Format format) {
  if (format == Format::Json) return report_json(report).dump(2);
  return report_text(report);
}

std::string render_verdict(const Verdict& v, const Certificate& c, const std::optional<EstimateReport>& oracle,
                           const std::vector<PathEstimate>& witness_checks, Format format) {
  if (format == Format::Json) {
    json out = {{"verdict", to_string(v.kind)}};
    if (v.kind == Verdict::Kind::Exists) out["value"] = render_value(v.value);
    if (v.kind == Verdict::Kind::DoesNotExist) {
      json w = json::array();
      for (const auto& p : v.witnesses) w.push_back(witness_text(p));
      out["witnesses"] = w;
    }
    if (!v.reason.empty()) out["reason"] = v.reason;
    out["certificate"] = certificate_json(c);
    json o = json::object();
    if (oracle) o = report_json(*oracle);
    if (!witness_checks.empty()) {
      json w = json::array();
      for (const auto& e : witness_checks) {
        json x = {{"path", e.label}, {"t", e.t.empty() ? 0.0 : e.t.front()}};
        if (!e.rejected) x["estimate"] = e.estimate;
        w.push_back(std::move(x));
      }
      o["witness_estimates"] = w;
    }
    out["oracle"] = o;
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "verdict: " << to_string(v.kind) << "\n";
  if (v.kind == Verdict::Kind::Exists) os << "value: " << render_value(v.value) << "\n";
  for (const auto& p : v.witnesses) os << "witness: " << witness_text(p) << "\n";
  if (!v.reason.empty()) os << "reason: " << v.reason << "\n";
  os << "certificate:\n" << render_certificate(c, Format::Text);
  if (oracle) os << report_text(*oracle);
  for (const auto& e : witness_checks)
    os << "  witness " << e.label << " at t=2^-10: " << (e.rejected ? "undefined" : decimal(e.estimate)) << "\n";
  return os.str();
}

RunResult run(const Query& q) {
  RunResult r;
  try {
    LimitProblem problem = problem_from_query(q);
    if (q.command == "probe" || q.mode == Mode::Probe) {
      EstimateReport report =
          random_path_suite(problem.numerator, problem.denominator, problem.vars, problem.point, q.paths, q.seed);
      if (q.format == Format::Json) {
        json out = {{"mode", "probe"}, {"oracle", report_json(report)}};
        r.output = out.dump(2) + "\n";
      } else {
        r.output = report_text(report);
      }
      return r;
    }
    if (q.command != "resolve") throw std::invalid_argument("unknown command '" + q.command + "'");
    ResolveOptions o;
    o.mode = q.mode;
    o.max_decompositions = q.max_decompositions;
    o.order = q.order;
    o.seed = q.seed;
    if (!q.zero_set_json.empty()) o.zero_set = parse_zero_set(q.zero_set_json, problem.vars);
    if (!q.decomposition_json.empty()) {
      o.hints.push_back(parse_decomposition(q.decomposition_json, problem.denominator));
    }
    Resolution res = resolve(problem, o);
    std::optional<EstimateReport> oracle;
    try {
      oracle = random_path_suite(problem.numerator, problem.denominator, problem.vars, problem.point, q.paths, q.seed);
    } catch (const std::runtime_error&) {
    }
    std::vector<PathEstimate> checks;
    if (res.verdict.kind == Verdict::Kind::DoesNotExist) checks = check_witnesses(problem, res.verdict);
    r.output = render_verdict(res.verdict, res.certificate, oracle, checks, q.format);
    r.exit_code = res.verdict.conclusive() ? 0 : 2;
  } catch (const ParseError& e) {
    r.exit_code = 1;
    r.error = std::string("parse error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    r.exit_code = 1;
    r.error = std::string("input error: ") + e.what();
  } catch (const nlohmann::json::exception& e) {
    r.exit_code = 1;
    r.error = std::string("input error: ") + e.what();
  }
  return r;
}

}  // namespace mvlim

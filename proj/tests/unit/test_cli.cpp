#include "doctest.h"
#include "support.hpp"

#include "mvlim/cli.hpp"
#include "mvlim/parser.hpp"

#include "json.hpp"

using namespace mvlim;
using nlohmann::json;

namespace {

Query query(const char* num, const char* den, const char* vars, Format f = Format::Json) {
  Query q;
  q.numerator = num;
  q.denominator = den;
  q.vars = vars;
  q.format = f;
  q.seed = 1;
  return q;
}

json run_json(const Query& q) {
  RunResult r = run(q);
  INFO(r.error);
  return json::parse(r.output);
}

}  // namespace

TEST_CASE("mode routing") {
  CHECK(parse_mode("auto") == Mode::Auto);
  CHECK(parse_mode("probe") == Mode::Probe);
  CHECK_THROWS_AS(parse_mode("fast"), std::invalid_argument);

  LimitProblem a{parse("x - y"), parse("sin(x) - sin(y)"), {"x", "y"}, {{"x", 0}, {"y", 0}}};
  CHECK(detect_route(a).nonisolated);
  LimitProblem b{parse("x*y"), parse("x^2 + y^2"), {"x", "y"}, {{"x", 0}, {"y", 0}}};
  CHECK_FALSE(detect_route(b).nonisolated);
  LimitProblem c{parse("x*y"), parse("x - y^2"), {"x", "y"}, {{"x", 0}, {"y", 0}}};
  CHECK(detect_route(c).nonisolated);
}

TEST_CASE("json verdicts") {
  json a = run_json(query("x - y", "sin(x) - sin(y)", "x,y"));
  CHECK(a["verdict"] == "exists");
  CHECK(a["value"] == "1");
  CHECK(a["certificate"].is_array());
  CHECK_FALSE(a["certificate"].empty());
  CHECK(a["oracle"]["suggestion"] == "converges-to");

  json b = run_json(query("x*y", "x^2 + y^2", "x,y"));
  CHECK(b["verdict"] == "does_not_exist");
  CHECK(b["witnesses"].size() == 2);
  CHECK_FALSE(b.contains("value"));

  for (const auto& step : a["certificate"]) {
    CHECK(step.contains("id"));
    CHECK(step.contains("rule"));
    CHECK(step.contains("claim"));
    CHECK(step.contains("status"));
  }
}

TEST_CASE("exit codes") {
  CHECK(run(query("x - y", "sin(x) - sin(y)", "x,y")).exit_code == 0);
  CHECK(run(query("x*y", "x^2 + y^2", "x,y", Format::Text)).exit_code == 0);
  CHECK(run(query("x^(1/2", "y", "x,y")).exit_code == 1);
  CHECK(run(query("x*z", "x^2 + y^2", "x,y")).exit_code == 1);

  Query wrong_point = query("x*y", "x^2 + y^2", "x,y");
  wrong_point.point = "0,0,0";
  CHECK(run(wrong_point).exit_code == 1);

  Query decimal_point = query("x*y", "x^2 + y^2", "x,y");
  decimal_point.point = "0.5,0";
  CHECK(run(decimal_point).exit_code == 1);

  // no decomposition reaches the thread curve without a hint
  Query thread = query("7*x^2*y*z^5 + x*y^3 - 3*x^4*y*z", "x^8 + x^2*y^2*z^4 + (y - x^3 + z^2)^2 + z^6 - x*y^3*z^5",
                       "x,y,z");
  thread.paths = 8;
  CHECK(run(thread).exit_code == 2);
}

TEST_CASE("decomposition hints") {
  Query q = query("7*x^2*y*z^5 + x*y^3 - 3*x^4*y*z", "x^8 + x^2*y^2*z^4 + (y - x^3 + z^2)^2 + z^6 - x*y^3*z^5",
                  "x,y,z");
  q.decomposition_json = R"({"u":["x^4","x*y*z^2","y-x^3+z^2","z^3"],"drop":["u2"],"m":[1,1,1]})";
  json r = run_json(q);
  REQUIRE(r["verdict"] == "does_not_exist");
  bool thread = false;
  for (const auto& w : r["witnesses"]) {
    std::string s = w.get<std::string>();
    if (s.find("x=t^3") != std::string::npos && s.find("z=t^4") != std::string::npos) {
      thread = true;
      CHECK(s.find("-> 1") != std::string::npos);
    }
  }
  CHECK(thread);

  Query bad = q;
  bad.decomposition_json = R"({"u":["x^4"],"v":"y^2"})";
  CHECK(run(bad).exit_code == 1);
}

TEST_CASE("zero set hints") {
  Query q = query("x - y", "sin(x) - sin(y)", "x,y");
  q.zero_set_json = R"({"curves":[{"param":{"x":"s","y":"s"}}],"components":[{"id":"all","direction":["1","0"]}]})";
  json r = run_json(q);
  CHECK(r["verdict"] == "exists");
  CHECK(r["value"] == "1");

  ZeroSetSpec s = parse_zero_set(R"({"curves":[{"implicit":"x-y"},{"implicit":"x+y"}]})", {"x", "y"});
  CHECK(s.curves.size() == 2);
  CHECK(s.components.empty());
  CHECK_THROWS(parse_zero_set(R"({"curves":[{"param":{"x":"s"}}]})", {"x", "y"}));
  CHECK_THROWS(parse_zero_set("not json", {"x", "y"}));
}

TEST_CASE("probe reports") {
  Query q = query("x^2*y", "x^4 + y^2", "x,y");
  q.command = "probe";
  q.seed = 7;
  RunResult r = run(q);
  CHECK(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["mode"] == "probe");
  CHECK(j["oracle"]["suggestion"] == "path-dependent");
  CHECK(j["oracle"]["paths"] == 20);
  CHECK(j["oracle"]["samples"].size() == 20);
}

TEST_CASE("quotient input and text output") {
  Query q;
  q.quotient = "(x^2 - y^2)/(cos(x) - cos(y))";
  q.vars = "x,y";
  q.seed = 2;
  RunResult r = run(q);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("exists") != std::string::npos);
  CHECK(r.output.find("-2") != std::string::npos);

  auto [n, d] = split_quotient(parse("(x - y)/(sin(x) - sin(y))"));
  CHECK(n == parse("x - y"));
  CHECK(d == parse("sin(x) - sin(y)"));
  CHECK(render_value(parse("-2")) == "-2");
  CHECK(render_value(parse("1/3")) == "1/3");
}

TEST_CASE("non-origin points") {
  Query q = query("(x-1)*y", "(x-1)^2 + y^2", "x,y");
  q.point = "1,0";
  json r = run_json(q);
  CHECK(r["verdict"] == "does_not_exist");

  Query s = query("sin(x - 1/2) - sin(y)", "x - 1/2 - y", "x,y");
  s.point = "1/2,0";
  json t = run_json(s);
  CHECK(t["verdict"] == "exists");
  CHECK(t["value"] == "1");
}

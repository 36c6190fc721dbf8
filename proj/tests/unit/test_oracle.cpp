#include "doctest.h"
#include "support.hpp"

#include "mvlim/oracle.hpp"
#include "mvlim/parser.hpp"

#include <cmath>

using namespace mvlim;

namespace {

PathSpec path(const char* label, const char* x, const char* y) {
  PathSpec p;
  p.label = label;
  p.param = {{"x", parse(x)}, {"y", parse(y)}};
  return p;
}

const Point kOrigin{{"x", 0}, {"y", 0}};
const std::vector<std::string> kXY{"x", "y"};

}  // namespace

TEST_CASE("path estimates") {
  PathEstimate a = estimate_path_limit(parse("x - y"), parse("sin(x) - sin(y)"), path("anti", "t", "-t"));
  CHECK(a.converged);
  CHECK(std::fabs(a.estimate - 1) < 1e-6);

  PathEstimate b = estimate_path_limit(parse("x*y"), parse("x^2 + y^2"), path("diagonal", "t", "t"));
  CHECK(std::fabs(b.estimate - 0.5) < 1e-12);

  PathEstimate c = estimate_path_limit(parse("x^2*y"), parse("x^4 + y^2"), path("parabola", "t", "t^2"));
  CHECK(std::fabs(c.estimate - 0.5) < 1e-12);

  PathEstimate d = estimate_path_limit(parse("0"), parse("x^2 + y^2"), path("line", "t", "2*t"));
  CHECK(d.estimate == 0);
  CHECK(d.converged);

  PathEstimate e = estimate_path_limit(parse("x"), parse("x^3 + y^2"), path("line", "t", "t"));
  CHECK(e.unbounded);

  PathEstimate f = estimate_path_limit(parse("1"), parse("x - y"), path("inside", "t", "t"));
  CHECK(f.rejected);
}

TEST_CASE("tolerance semantics") {
  CHECK(close(1.0, 1.0005));
  CHECK_FALSE(close(1.0, 1.01));
  CHECK(close(0.0, 5e-4));
  CHECK(close(1000.0, 1000.9));
}

TEST_CASE("suite suggestions") {
  auto conv = random_path_suite(parse("x^3*y^3"), parse("x^6 + y^4"), kXY, kOrigin, 20, 1);
  CHECK(conv.suggestion == EstimateReport::Suggestion::ConvergesTo);
  CHECK(std::fabs(conv.value) < 1e-3);

  auto dep = random_path_suite(parse("x*y"), parse("x^2 + y^2"), kXY, kOrigin, 20, 1);
  CHECK(dep.suggestion == EstimateReport::Suggestion::PathDependent);

  auto dep2 = random_path_suite(parse("x^2*y"), parse("x^4 + y^2"), kXY, kOrigin, 20, 7);
  CHECK(dep2.suggestion == EstimateReport::Suggestion::PathDependent);

  auto unb = random_path_suite(parse("1"), parse("x^2 + y^2"), kXY, kOrigin, 8, 3);
  CHECK(unb.suggestion == EstimateReport::Suggestion::Unbounded);

  CHECK_THROWS_AS(random_path_suite(parse("x"), parse("y"), kXY, kOrigin, 7, 1), std::invalid_argument);
}

TEST_CASE("suites are deterministic in the seed") {
  auto a = random_path_suite(parse("x - y"), parse("sin(x) - sin(y)"), kXY, kOrigin, 12, 5);
  auto b = random_path_suite(parse("x - y"), parse("sin(x) - sin(y)"), kXY, kOrigin, 12, 5);
  REQUIRE(a.paths.size() == b.paths.size());
  for (size_t i = 0; i < a.paths.size(); ++i) {
    CHECK(a.paths[i].label == b.paths[i].label);
    CHECK(a.paths[i].estimate == b.paths[i].estimate);
  }
}

TEST_CASE("paths go through a translated point") {
  Point p{{"x", 1}, {"y", 0}};
  auto r = random_path_suite(parse("(x-1)*y"), parse("(x-1)^2 + y^2"), kXY, p, 20, 2);
  CHECK(r.suggestion == EstimateReport::Suggestion::PathDependent);
}

TEST_CASE("finite differences") {
  std::vector<std::vector<double>> pts{{0.3, 0.4}, {0.5, 0.1}};
  CHECK(finite_difference_check(parse("sin(x)*exp(y)"), kXY, {1, 2}, pts) < 1e-6);
  CHECK(finite_difference_check(parse("sec(x*y) + abs(x - 2*y)"), kXY, {make_rational(1, 3), -1}, pts) < 1e-6);
}

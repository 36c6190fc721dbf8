#include "doctest.h"
#include "support.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/evaluate.hpp"
#include "mvlim/limits.hpp"
#include "mvlim/oracle.hpp"
#include "mvlim/parser.hpp"
#include "mvlim/polynomial.hpp"

#include <cmath>

using namespace mvlim;
using mvlim::testing::Rng;

TEST_CASE("differentiate") {
  CHECK(differentiate(parse("sin(x) - sin(y)"), "x") == parse("cos(x)"));
  CHECK(differentiate(parse("x^2+y^2"), "x") == parse("2*x"));
  CHECK(differentiate(parse("tan(z-x^2)"), "z") == parse("sec(z-x^2)^2"));
  CHECK(differentiate(parse("x^3*y"), "y") == parse("x^3"));
  CHECK(differentiate(parse("exp(2*x)"), "x") == parse("2*exp(2*x)"));
  CHECK(differentiate(parse("7"), "x").is_zero());
}

TEST_CASE("directional derivative") {
  std::vector<std::string> xy{"x", "y"};
  CHECK(directional_derivative(parse("sin(x) - sin(y)"), xy, {1, 0}) == parse("cos(x)"));
  CHECK(directional_derivative(parse("cos(x) - cos(y)"), xy, {0, 1}) == parse("sin(y)"));
  CHECK(directional_derivative(parse("x"), xy, {1, 1}) == parse("1"));
  CHECK_THROWS_AS(directional_derivative(parse("x"), xy, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(directional_derivative(parse("x"), xy, {1}), std::invalid_argument);
}

TEST_CASE("substitute") {
  Expr h = parse("x^2*y/(x^4+y^2)");
  CHECK(substitute(h, {{"y", parse("x^2")}}) == parse("1/2"));
  CHECK(substitute(parse("x"), {{"x", parse("x")}}) == parse("x"));
  // simultaneous, not sequential
  CHECK(substitute(parse("x + 2*y"), {{"x", parse("y")}, {"y", parse("x")}}) == parse("y + 2*x"));

  Expr num = parse("7*x^2*y*z^5 + x*y^3 - 3*x^4*y*z");
  Expr thread = substitute(num, {{"x", parse("t^3")}, {"y", parse("t^12+t^9-t^8")}, {"z", parse("t^4")}});
  CHECK(free_variables(thread) == std::set<std::string>{"t"});
}

TEST_CASE("translate and exact values") {
  Expr e = parse("x*y + x");
  Point p{{"x", 1}, {"y", make_rational(1, 2)}};
  CHECK(translate_to_origin(e, p) == parse("(x+1)*(y+1/2) + x + 1"));
  CHECK(*exact_value_at(e, p) == make_rational(3, 2));
  CHECK_FALSE(exact_value_at(parse("sin(x)"), p));
  CHECK(*exact_value_at(parse("sin(x)"), Point{{"x", 0}}) == 0);
}

TEST_CASE("univariate limits") {
  auto value = [](const char* n, const char* d) { return univariate_limit(parse(n), parse(d), "t"); };
  Verdict a = value("t^2", "sin(t)^2");
  REQUIRE(a.kind == Verdict::Kind::Exists);
  CHECK(*a.rational_value() == 1);
  CHECK(*value("t^3", "t^2").rational_value() == 0);
  Verdict b = value("t^2", "t^3");
  CHECK(b.kind == Verdict::Kind::DoesNotExist);

  OneSidedLimit c = limit_at_zero_plus(parse("t^2"), parse("t^3"), "t");
  REQUIRE(c.value);
  CHECK(c.value->kind == ExtendedValue::Kind::PlusInfinity);

  TwoSidedLimit d = two_sided_limit(parse("t"), parse("abs(t)"), "t");
  CHECK_FALSE(d.value);
  REQUIRE(d.right.value);
  REQUIRE(d.left.value);
  CHECK(d.right.value->value == 1);
  CHECK(d.left.value->value == -1);
}

TEST_CASE("taylor leading forms") {
  auto f = taylor_leading(parse("2 - 2*cos(x^2*y^2)"));
  REQUIRE(f);
  CHECK(f->leading == parse("x^4*y^4"));
  CHECK(f->equivalence_ratio_limit == 1);

  auto g = taylor_leading(parse("-x^9*sin(y)"));
  REQUIRE(g);
  CHECK(g->leading == parse("-x^9*y"));

  auto s = taylor_leading(parse("sin(x)"));
  REQUIRE(s);
  CHECK(s->leading == parse("x"));

  CHECK_FALSE(taylor_leading(parse("x^2 + y")));
  CHECK_FALSE(taylor_leading(parse("sin(x + y^2) * cos(y)")));
}

TEST_CASE("property: taylor leading forms have ratio limit one along the reduction") {
  Rng rng(21);
  std::vector<Function> fs{Function::Sin, Function::Tan, Function::Exp, Function::Cos, Function::Sec};
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Expr inner = Expr::constant(testing::random_rational(rng, 3, 2) + Rational(4)) *
                 Expr::pow(Expr::variable("x"), std::uniform_int_distribution<int>(1, 3)(rng)) *
                 Expr::pow(Expr::variable("y"), std::uniform_int_distribution<int>(1, 3)(rng));
    Function f = fs[i % fs.size()];
    Expr g = Expr::func(f, inner);
    if (f == Function::Cos || f == Function::Sec || f == Function::Exp) g = g - Expr::constant(1);
    Expr e = Expr::pow(Expr::variable("x"), std::uniform_int_distribution<int>(0, 2)(rng)) * g;
    auto approx = taylor_leading(e);
    REQUIRE(approx);
    Expr u = Expr::variable("u");
    Expr reduced_e = substitute(substitute(e, {{"x", u}}), {{"y", u}});
    Expr reduced_l = substitute(substitute(approx->leading, {{"x", u}}), {{"y", u}});
    Verdict r = univariate_limit(reduced_e, reduced_l, "u");
    INFO(to_string(e));
    REQUIRE(r.kind == Verdict::Kind::Exists);
    CHECK(*r.rational_value() == 1);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("property: directional derivatives match central differences") {
  Rng rng(22);
  std::uniform_real_distribution<double> coord(0.2, 0.8);
  std::vector<std::string> vars{"x", "y", "z"};
  int done = 0;
  double worst = 0;
  while (done < 200) {
    Expr e = testing::random_raw(rng, vars, 3)->build();
    std::vector<double> pt{coord(rng), coord(rng), coord(rng)};
    auto val = evaluate(e, {{"x", pt[0]}, {"y", pt[1]}, {"z", pt[2]}});
    if (!val || std::fabs(*val) > 1e3) continue;
    std::vector<Rational> dir;
    for (int j = 0; j < 3; ++j) dir.push_back(testing::random_rational(rng, 3, 2));
    if (dir == std::vector<Rational>(3, Rational(0))) continue;
    double dev = finite_difference_check(e, vars, dir, {pt});
    worst = std::max(worst, dev);
    ++done;
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("property: directional derivative is linear in the direction") {
  Rng rng(23);
  std::vector<std::string> vars{"x", "y"};
  for (int i = 0; i < 200; ++i) {
    Expr e = testing::random_raw(rng, vars, 3)->build();
    std::vector<Rational> v{testing::random_rational(rng, 3, 2), 1}, w{2, testing::random_rational(rng, 3, 2)};
    Rational a = testing::random_rational(rng, 3, 2), b = testing::random_rational(rng, 3, 2);
    std::vector<Rational> mix{a * v[0] + b * w[0], a * v[1] + b * w[1]};
    if (mix[0] == 0 && mix[1] == 0) continue;
    Expr lhs = directional_derivative(e, vars, mix);
    Expr rhs = Expr::constant(a) * directional_derivative(e, vars, v) + Expr::constant(b) * directional_derivative(e, vars, w);
    INFO(to_string(e));
    std::map<std::string, double> at{{"x", 0.37}, {"y", 0.61}};
    auto l = evaluate(lhs, at), r = evaluate(rhs, at);
    if (!l || !r) continue;
    CHECK(std::fabs(*l - *r) <= 1e-10 * std::max({1.0, std::fabs(*l), std::fabs(*r)}));
  }
}

TEST_CASE("property: directional derivative is exactly linear on polynomials") {
  Rng rng(24);
  std::vector<std::string> vars{"x", "y"};
  int polys = 0;
  for (int i = 0; i < 400 && polys < 100; ++i) {
    Expr e = testing::random_raw(rng, vars, 3)->build();
    if (!as_polynomial(e)) continue;
    ++polys;
    Rational a = testing::random_rational(rng, 4, 3);
    Expr lhs = directional_derivative(e, vars, {a, 1});
    Expr rhs = Expr::constant(a) * differentiate(e, "x") + differentiate(e, "y");
    auto pl = as_polynomial(lhs), pr = as_polynomial(rhs);
    CHECK(pl.has_value() == pr.has_value());
    if (pl && pr) CHECK(*pl == *pr);
  }
  CHECK(polys > 20);
}

#include "doctest.h"
#include "support.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/evaluate.hpp"
#include "mvlim/hifloat.hpp"
#include "mvlim/parser.hpp"
#include "mvlim/series.hpp"

using namespace mvlim;
using mvlim::testing::Rng;

namespace {

PuiseuxSeries series_of(const std::vector<std::pair<Rational, Rational>>& terms, std::optional<Rational> order) {
  std::vector<SeriesTerm> ts;
  for (const auto& [e, c] : terms) ts.push_back({e, c});
  PuiseuxSeries s = PuiseuxSeries::exact(ts);
  return order ? s.truncated(*order) : s;
}

bool same_terms(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  if (a.terms().size() != b.terms().size() || a.order() != b.order()) return false;
  for (size_t i = 0; i < a.terms().size(); ++i)
    if (a.terms()[i].exponent != b.terms()[i].exponent || a.terms()[i].coefficient != b.terms()[i].coefficient)
      return false;
  return true;
}

}  // namespace

TEST_CASE("maclaurin series") {
  PuiseuxSeries s = puiseux_expand(parse("sin(t)"), "t", 4);
  REQUIRE(s.terms().size() == 2);
  CHECK(s.terms()[0].exponent == 1);
  CHECK(s.terms()[0].coefficient == 1);
  CHECK(s.terms()[1].exponent == 3);
  CHECK(s.terms()[1].coefficient == make_rational(-1, 6));
  REQUIRE(s.order());
  CHECK(*s.order() >= 4);
}

TEST_CASE("rational power expansion") {
  PuiseuxSeries s = puiseux_expand(parse("t^(5/2)/(2*t^2)"), "t", 2);
  REQUIRE(s.has_leading_term());
  CHECK(s.leading().exponent == make_rational(1, 2));
  CHECK(s.leading().coefficient == make_rational(1, 2));
}

TEST_CASE("thread curve numerator cancels down to degree 24") {
  Expr num = parse("7*x^2*y*z^5 + x*y^3 - 3*x^4*y*z");
  Expr den = parse("x^8 + x^2*y^2*z^4 + (y - x^3 + z^2)^2 + z^6 - x*y^3*z^5");
  std::map<std::string, Expr> thread{{"x", parse("t^3")}, {"y", parse("t^12+t^9-t^8")}, {"z", parse("t^4")}};
  PuiseuxSeries n = puiseux_expand(substitute(num, thread), "t", 25);
  PuiseuxSeries d = puiseux_expand(substitute(den, thread), "t", 25);
  REQUIRE(n.has_leading_term());
  REQUIRE(d.has_leading_term());
  CHECK(n.leading().exponent == 24);
  CHECK(n.leading().coefficient == 3);
  CHECK(d.leading().exponent == 24);
  CHECK(d.leading().coefficient == 3);
}

TEST_CASE("expansion errors are reported") {
  CHECK_THROWS_AS(puiseux_expand(parse("1/t"), "t", 2), SeriesError);
  CHECK_THROWS_AS(puiseux_expand(parse("t*x"), "t", 2), SeriesError);
  try {
    puiseux_expand(parse("t^(-1/2) + 1"), "t", 2);
    FAIL("expected a negative exponent");
  } catch (const SeriesError& e) {
    CHECK(e.reason() == SeriesError::Reason::NegativeExponent);
  }
}

TEST_CASE("series rendering") {
  CHECK(series_of({{1, 1}}, Rational(5)).is_exact());
  PuiseuxSeries s = series_of({{1, 1}, {3, make_rational(-1, 6)}, {7, 1}}, Rational(5));
  CHECK(s.terms().size() == 2);
  CHECK(s.to_string().find("O(t^5)") != std::string::npos);
}

TEST_CASE("property: series arithmetic is a commutative ring up to truncation") {
  Rng rng(31);
  auto random_series = [&] {
    std::vector<std::pair<Rational, Rational>> terms;
    Rational e = make_rational(std::uniform_int_distribution<long>(0, 3)(rng), 2);
    int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < n; ++i) {
      Rational c = testing::random_rational(rng, 5, 3);
      if (c != 0) terms.push_back({e, c});
      e += make_rational(std::uniform_int_distribution<long>(1, 3)(rng), 3);
    }
    std::optional<Rational> order;
    if (std::uniform_int_distribution<int>(0, 1)(rng)) order = e + Rational(1);
    return series_of(terms, order);
  };
  Rational cap = 20;
  for (int i = 0; i < 300; ++i) {
    PuiseuxSeries a = random_series(), b = random_series(), c = random_series();
    CHECK(same_terms(add(add(a, b, cap), c, cap), add(a, add(b, c, cap), cap)));
    CHECK(same_terms(add(a, b, cap), add(b, a, cap)));
    CHECK(same_terms(multiply(a, b, cap), multiply(b, a, cap)));
    CHECK(same_terms(multiply(multiply(a, b, cap), c, cap), multiply(a, multiply(b, c, cap), cap)));
  }
}

TEST_CASE("property: truncation error is bounded by C t^order") {
  Rng rng(32);
  std::vector<Rational> orders{2, 3, make_rational(7, 2), 4};
  for (int i = 0; i < 40; ++i) {
    Expr e = testing::random_univariate(rng, "t");
    Rational order = orders[static_cast<size_t>(i) % orders.size()];
    INFO(to_string(e));
    PuiseuxSeries s = puiseux_expand(e, "t", order);
    PuiseuxSeries deep = puiseux_expand(e, "t", order + 3);
    // the shallow series is a prefix of the deep one
    CHECK(same_terms(s, deep.truncated(order)));
    HiFloat c = 0;
    for (const auto& term : deep.terms())
      if (term.exponent >= order) c += abs(ScalarTraits<HiFloat>::from_rational(term.coefficient));
    for (int k = 12; k <= 20; k += 4) {
      HiFloat t = ScalarTraits<HiFloat>::from_rational(make_rational(1, 1L << k));
      HiFloat scale = pow(t, ScalarTraits<HiFloat>::from_rational(order));
      auto v = evaluate<HiFloat>(e, {{"t", t}});
      REQUIRE(v);
      HiFloat deep_err = abs(*v - deep.evaluate(t));
      CHECK(static_cast<double>(deep_err / scale) < 1e-3);
      CHECK(abs(*v - s.evaluate(t)) <= c * scale + deep_err);
    }
  }
}

#include "doctest.h"
#include "support.hpp"

#include "mvlim/parser.hpp"
#include "mvlim/transversal.hpp"

using namespace mvlim;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};
const Point kOrigin2{{"x", 0}, {"y", 0}};
const Point kOrigin3{{"x", 0}, {"y", 0}, {"z", 0}};

ZeroSetSpec diagonal() {
  CurveSpec c;
  c.param = {{"x", parse("s")}, {"y", parse("s")}};
  return {{c}, {}};
}

ComponentSpec cell(std::string id, std::vector<SignCondition> where, std::vector<Rational> dir = {}) {
  ComponentSpec c;
  c.id = std::move(id);
  c.where = std::move(where);
  c.direction = std::move(dir);
  return c;
}

ComponentSpec east() { return cell("east", {{parse("x - y"), 1}, {parse("x + y"), 1}}); }
ComponentSpec north() { return cell("north", {{parse("y - x"), 1}, {parse("x + y"), 1}}); }

LimitProblem problem(const char* f, const char* g, const std::vector<std::string>& vars, const Point& p) {
  return {parse(f), parse(g), vars, p};
}

}  // namespace

TEST_CASE("transversality") {
  CHECK(check_transversality(diagonal(), {1, 0}, kXY, kOrigin2).transversal);
  CHECK_FALSE(check_transversality(diagonal(), {1, 1}, kXY, kOrigin2).transversal);
  CHECK_FALSE(check_transversality(diagonal(), {-2, -2}, kXY, kOrigin2).transversal);

  CurveSpec paraboloid;
  paraboloid.implicit = parse("z - x^2 - y^2");
  ZeroSetSpec s{{paraboloid}, {}};
  CHECK(check_transversality(s, {0, 0, 1}, kXYZ, kOrigin3).transversal);
  CHECK_FALSE(check_transversality(s, {1, 0, 0}, kXYZ, kOrigin3).transversal);

  CurveSpec cusp;
  cusp.implicit = parse("y^2 - x^3");
  TransversalityResult d = check_transversality(ZeroSetSpec{{cusp}, {}}, {1, 0}, kXY, kOrigin2);
  CHECK_FALSE(d.transversal);
  CHECK(d.degenerate);
}

TEST_CASE("falsification of nonvanishing derivatives") {
  ComponentSpec whole = cell("whole", {});
  FalsifyResult a = falsify_nonvanishing(parse("sin(x) - sin(y)"), kXY, {1, 0}, whole, kOrigin2, make_rational(1, 2));
  CHECK_FALSE(a.counterexample);
  CHECK(a.proved_nonzero);

  Expr g = parse("cos(x) - cos(y)");
  FalsifyResult b = falsify_nonvanishing(g, kXY, {1, 0}, east(), kOrigin2);
  CHECK_FALSE(b.counterexample);
  CHECK(b.samples_in_component > 100);

  FalsifyResult c = falsify_nonvanishing(g, kXY, {1, 0}, north(), kOrigin2);
  REQUIRE(c.counterexample);
  CHECK(std::fabs((*c.counterexample)[0]) < 1e-9);
  CHECK((*c.counterexample)[1] > 0);

  FalsifyResult d = falsify_nonvanishing(parse("x"), kXY, {0, 1}, whole, kOrigin2);
  CHECK(d.symbolic_zero);
  CHECK(d.counterexample);

  ComponentSpec nowhere = cell("nowhere", {{parse("x^2 + 1"), -1}});
  CHECK(falsify_nonvanishing(g, kXY, {1, 0}, nowhere, kOrigin2).empty_component);
}

TEST_CASE("zero set detection") {
  auto s = detect_zero_set(problem("x - y", "sin(x) - sin(y)", kXY, kOrigin2));
  REQUIRE(s);
  CHECK(s->curves.size() == 1);
  auto c = detect_zero_set(problem("x^2 - y^2", "cos(x) - cos(y)", kXY, kOrigin2));
  REQUIRE(c);
  CHECK(c->curves.size() == 2);
  CHECK_FALSE(detect_zero_set(problem("x*y", "x^2 + y^2", kXY, kOrigin2)));
}

TEST_CASE("resolution through transverse directions") {
  Resolution a = resolve_nonisolated(problem("x - y", "sin(x) - sin(y)", kXY, kOrigin2), diagonal());
  REQUIRE(a.verdict.kind == Verdict::Kind::Exists);
  CHECK(*a.verdict.rational_value() == 1);

  LimitProblem p23 = problem("sin(z) - sin(x^2+y^2)", "tan(z - x^2) - tan(y^2)", kXYZ, kOrigin3);
  CurveSpec paraboloid;
  paraboloid.implicit = parse("z - x^2 - y^2");
  ComponentSpec above = cell("above", {{parse("z - x^2 - y^2"), 1}}, {0, 0, 1});
  ComponentSpec below = cell("below", {{parse("z - x^2 - y^2"), -1}}, {0, 0, 1});
  Resolution b = resolve_nonisolated(p23, ZeroSetSpec{{paraboloid}, {above, below}});
  REQUIRE(b.verdict.kind == Verdict::Kind::Exists);
  CHECK(*b.verdict.rational_value() == 1);

  CurveSpec d1, d2;
  d1.implicit = parse("x - y");
  d2.implicit = parse("x + y");
  ComponentSpec west = cell("west", {{parse("y - x"), 1}, {parse("x + y"), -1}}, {1, 0});
  ComponentSpec south = cell("south", {{parse("x - y"), 1}, {parse("x + y"), -1}}, {0, 1});
  ComponentSpec e = east(), n = north();
  e.direction = {1, 0};
  n.direction = {0, 1};
  Resolution c = resolve_nonisolated(problem("x^2 - y^2", "cos(x) - cos(y)", kXY, kOrigin2),
                                     ZeroSetSpec{{d1, d2}, {e, n, west, south}});
  REQUIRE(c.verdict.kind == Verdict::Kind::Exists);
  CHECK(*c.verdict.rational_value() == -2);
  CHECK(c.certificate.has_proved_exact());
}

TEST_CASE("hypothesis failures are inconclusive") {
  // numerator does not vanish on the zero set
  Resolution a = resolve_nonisolated(problem("1 + x", "sin(x) - sin(y)", kXY, kOrigin2), diagonal());
  CHECK(a.verdict.kind == Verdict::Kind::Inconclusive);

  // the only direction offered is tangent
  ZeroSetSpec s = diagonal();
  s.components.push_back(cell("whole", {}, {1, 1}));
  Resolution b = resolve_nonisolated(problem("x - y", "sin(x) - sin(y)", kXY, kOrigin2), s);
  CHECK(b.verdict.kind == Verdict::Kind::Inconclusive);

  // D_v g vanishes in the component
  CurveSpec d1, d2;
  d1.implicit = parse("x - y");
  d2.implicit = parse("x + y");
  ComponentSpec n = north();
  n.direction = {1, 0};
  Resolution c = resolve_nonisolated(problem("x^2 - y^2", "cos(x) - cos(y)", kXY, kOrigin2),
                                     ZeroSetSpec{{d1, d2}, {n}});
  CHECK(c.verdict.kind == Verdict::Kind::Inconclusive);
}

TEST_CASE("a pole of the quotient at the point is not read as a value") {
  // f/g = 1 above the parabola and -1 below; D_v f has abs(y - x^2) in a denominator
  CurveSpec parabola;
  parabola.implicit = parse("y - x^2");
  NonisolatedResolution r =
      resolve_nonisolated_detailed(problem("abs(y - x^2)", "y - x^2", kXY, kOrigin2), ZeroSetSpec{{parabola}, {}});
  CHECK(r.resolution.verdict.kind != Verdict::Kind::Exists);
  for (const auto& c : r.components) CHECK_FALSE(c.verdict.reason == "continuity");
}

TEST_CASE("property: quotients are unchanged by scaling the direction") {
  LimitProblem p = problem("x^2 - y^2", "cos(x) - cos(y)", kXY, kOrigin2);
  CurveSpec d1, d2;
  d1.implicit = parse("x - y");
  d2.implicit = parse("x + y");
  std::vector<Rational> scales{1, 2, make_rational(1, 3), 7, make_rational(5, 2)};
  std::optional<std::pair<Expr, Expr>> reference;
  for (const auto& a : scales) {
    ComponentSpec e = east();
    e.direction = {a, 0};
    NonisolatedResolution r = resolve_nonisolated_detailed(p, ZeroSetSpec{{d1, d2}, {e}});
    REQUIRE(r.components.size() == 1);
    auto q = std::make_pair(r.components[0].quotient_num, r.components[0].quotient_den);
    if (!reference) reference = q;
    CHECK(q.first == reference->first);
    CHECK(q.second == reference->second);
    CHECK(r.resolution.verdict.kind == Verdict::Kind::Exists);
    CHECK(*r.resolution.verdict.rational_value() == -2);
  }
}

TEST_CASE("ball samples stay in the punctured ball") {
  Point p{{"x", 1}, {"y", -2}};
  auto pts = ball_samples(kXY, p, make_rational(1, 4), 500);
  CHECK(pts.size() == 500);
  for (const auto& q : pts) {
    double dx = q.at("x") - 1, dy = q.at("y") + 2;
    double r2 = dx * dx + dy * dy;
    CHECK(r2 <= 1.0 / 16 + 1e-12);
    CHECK(r2 > 0);
  }
}

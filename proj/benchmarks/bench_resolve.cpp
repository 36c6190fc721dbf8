#include "mvlim/lp.hpp"
#include "mvlim/oracle.hpp"
#include "mvlim/parser.hpp"
#include "mvlim/resolver.hpp"
#include "mvlim/series.hpp"

#include <benchmark/benchmark.h>

using namespace mvlim;

namespace {

LimitProblem problem(const char* f, const char* g, std::vector<std::string> vars) {
  LimitProblem p{parse(f), parse(g), vars, {}};
  for (const auto& v : p.vars) p.point[v] = 0;
  return p;
}

void BM_ResolveNonisolated(benchmark::State& state) {
  LimitProblem p = problem("x^2 - y^2", "cos(x) - cos(y)", {"x", "y"});
  for (auto _ : state) benchmark::DoNotOptimize(resolve(p));
}
BENCHMARK(BM_ResolveNonisolated)->Unit(benchmark::kMillisecond);

void BM_ResolvePolarBound(benchmark::State& state) {
  LimitProblem p = problem("x^3*y^2", "x^6 + x^2*y^2 + y^6", {"x", "y"});
  for (auto _ : state) benchmark::DoNotOptimize(resolve(p));
}
BENCHMARK(BM_ResolvePolarBound)->Unit(benchmark::kMillisecond);

void BM_ResolveTaylor(benchmark::State& state) {
  LimitProblem p = problem("2 - 2*cos(x^2*y^2)", "x^10 + x^6*y^2 + y^6 - x^9*sin(y)", {"x", "y"});
  for (auto _ : state) benchmark::DoNotOptimize(resolve(p));
}
BENCHMARK(BM_ResolveTaylor)->Unit(benchmark::kMillisecond);

void BM_ThreadCurve(benchmark::State& state) {
  const char* g = "x^8 + x^2*y^2*z^4 + (y - x^3 + z^2)^2 + z^6 - x*y^3*z^5";
  LimitProblem p = problem("7*x^2*y*z^5 + x*y^3 - 3*x^4*y*z", g, {"x", "y", "z"});
  ResolveOptions o;
  SquareDecomposition d =
      make_decomposition(p.denominator, {parse("x^4"), parse("x*y*z^2"), parse("y - x^3 + z^2"), parse("z^3")});
  d.drop = {1};
  d.m = {1, 1, 1};
  o.hints.push_back(d);
  for (auto _ : state) benchmark::DoNotOptimize(resolve(p, o));
}
BENCHMARK(BM_ThreadCurve)->Unit(benchmark::kMillisecond);

void BM_PuiseuxExpand(benchmark::State& state) {
  Expr e = parse("sin(t^(1/2)) * tan(t) / (1 + exp(t) - cos(t^(1/3)))");
  for (auto _ : state) benchmark::DoNotOptimize(puiseux_expand(e, "t", state.range(0)));
}
BENCHMARK(BM_PuiseuxExpand)->Arg(2)->Arg(4)->Arg(8);

void BM_PathSuite(benchmark::State& state) {
  Expr f = parse("x - y"), g = parse("sin(x) - sin(y)");
  Point p{{"x", 0}, {"y", 0}};
  for (auto _ : state) benchmark::DoNotOptimize(random_path_suite(f, g, {"x", "y"}, p, 20, 1));
}
BENCHMARK(BM_PathSuite)->Unit(benchmark::kMillisecond);

void BM_Simplex(benchmark::State& state) {
  std::vector<Rational> c{1, 1, 1};
  std::vector<std::vector<Rational>> a{{3, 1, 0}, {0, 1, 2}, {4, 0, 5}, {1, 1, 1}};
  std::vector<Rational> b{7, 9, 10, 6};
  for (auto _ : state) benchmark::DoNotOptimize(maximize(c, a, b));
}
BENCHMARK(BM_Simplex);

}  // namespace

BENCHMARK_MAIN();

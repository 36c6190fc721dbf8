#include "mvlim/oracle.hpp"

#include "mvlim/calculus.hpp"
#include "mvlim/hifloat.hpp"
#include "mvlim/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mvlim {

namespace {

using HiMap = std::map<std::string, HiFloat>;

std::optional<HiFloat> eval_hi(const Expr& e, const HiMap& at) { return evaluate<HiFloat>(e, at); }

HiFloat hi(const Rational& q) { return ScalarTraits<HiFloat>::from_rational(q); }

std::string describe(const std::map<std::string, Expr>& param) {
  std::string out;
  for (const auto& [v, e] : param) {
    if (!out.empty()) out += ", ";
    out += v + "=" + to_string(e);
  }
  return out;
}

}  // namespace

std::vector<Rational> TSchedule::values() const {
  std::vector<Rational> out;
  Rational t = start;
  for (int k = 0; k < count; ++k) {
    out.push_back(t);
    t *= ratio;
  }
  return out;
}

bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string to_string(EstimateReport::Suggestion s) {
  switch (s) {
    case EstimateReport::Suggestion::ConvergesTo: return "converges-to";
    case EstimateReport::Suggestion::PathDependent: return "path-dependent";
    case EstimateReport::Suggestion::Unbounded: return "unbounded";
    case EstimateReport::Suggestion::Noisy: return "noisy";
  }
  return "noisy";
}

PathEstimate estimate_path_limit(const Expr& num, const Expr& den, const PathSpec& path,
                                 const OracleOptions& options) {
  PathEstimate out;
  out.label = path.label.empty() ? describe(path.param) : path.label;
  for (const auto& tq : path.schedule.values()) {
    HiMap tmap{{"t", hi(tq)}};
    HiMap at;
    bool ok = true;
    for (const auto& [v, e] : path.param) {
      auto x = eval_hi(e, tmap);
      if (!x) {
        ok = false;
        break;
      }
      at[v] = *x;
    }
    std::optional<double> value;
    if (ok) {
      auto q = evaluate_quotient<HiFloat>(num, den, at);
      if (q) value = q->convert_to<double>();
    }
    if (value && std::isnan(*value)) value.reset();
    if (!value) ++out.undefined;
    out.t.push_back(tq.get_d());
    out.values.push_back(value);
  }
  const int n = static_cast<int>(out.values.size());
  out.rejected = 2 * out.undefined > n;
  std::vector<double> tail;
  for (auto it = out.values.rbegin(); it != out.values.rend() && static_cast<int>(tail.size()) < options.tail; ++it)
    if (*it) tail.push_back(**it);
  std::reverse(tail.begin(), tail.end());
  if (tail.empty()) {
    out.rejected = true;
    return out;
  }
  out.estimate = tail.back();
  auto [lo, hi_it] = std::minmax_element(tail.begin(), tail.end());
  out.tail_spread = *hi_it - *lo;
  bool growing = true;
  for (size_t i = 1; i < tail.size(); ++i) growing = growing && std::fabs(tail[i]) >= std::fabs(tail[i - 1]);
  out.unbounded = std::fabs(out.estimate) > options.unbounded_threshold && growing;
  out.converged = !out.unbounded && close(*lo, *hi_it, options.tolerance);
  return out;
}

EstimateReport estimate_paths(const Expr& num, const Expr& den, const std::vector<PathSpec>& paths,
                              const OracleOptions& options) {
  EstimateReport r;
  std::vector<double> conv;
  int unbounded_pos = 0, unbounded_neg = 0, noisy = 0;
  for (const auto& p : paths) {
    PathEstimate e = estimate_path_limit(num, den, p, options);
    if (e.rejected) {
      ++r.rejected;
    } else if (e.converged) {
      conv.push_back(e.estimate);
    } else if (e.unbounded) {
      (e.estimate > 0 ? unbounded_pos : unbounded_neg)++;
    } else {
      ++noisy;
    }
    r.paths.push_back(std::move(e));
  }
  if (r.rejected == static_cast<int>(paths.size())) throw std::runtime_error("every sample path was rejected");

  bool disagree = false;
  if (!conv.empty()) {
    auto [lo, hi_it] = std::minmax_element(conv.begin(), conv.end());
    r.cross_spread = *hi_it - *lo;
    disagree = !close(*lo, *hi_it, options.tolerance);
  }
  const int unbounded = unbounded_pos + unbounded_neg;
  if (disagree || (unbounded > 0 && !conv.empty()) || (unbounded_pos > 0 && unbounded_neg > 0)) {
    r.suggestion = EstimateReport::Suggestion::PathDependent;
  } else if (noisy > 0) {
    r.suggestion = EstimateReport::Suggestion::Noisy;
  } else if (unbounded > 0) {
    r.suggestion = EstimateReport::Suggestion::Unbounded;
  } else {
    r.suggestion = EstimateReport::Suggestion::ConvergesTo;
    double sum = 0;
    for (double v : conv) sum += v;
    r.value = sum / static_cast<double>(conv.size());
  }
  return r;
}

EstimateReport random_path_suite(const Expr& num, const Expr& den, const std::vector<std::string>& vars,
                                 const Point& point, int n_paths, std::uint64_t seed, const OracleOptions& options) {
  if (n_paths < 8) throw std::invalid_argument("random_path_suite needs at least 8 paths");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-16, 15);
  static const Rational kPowers[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};
  std::uniform_int_distribution<int> power_index(0, 4);
  auto nonzero = [&] {
    int k = coeff(rng);
    return Rational(k >= 0 ? k + 1 : k, 16);
  };
  const Expr t = Expr::variable("t");

  // Exponent differences of denominator terms that trade one variable for
  // another; curves balancing such a pair probe the critical regime.
  std::vector<std::pair<size_t, size_t>> trade_vars;
  std::vector<std::pair<Rational, Rational>> trade_weights;
  if (auto g = as_polynomial(translate_to_origin(den, point))) {
    for (size_t a = 0; a < g->size(); ++a)
      for (size_t b = a + 1; b < g->size(); ++b) {
        std::vector<Rational> d;
        for (const auto& v : vars) d.push_back((*g)[a].exponent_of(v) - (*g)[b].exponent_of(v));
        std::vector<size_t> pos, neg;
        for (size_t j = 0; j < d.size(); ++j) {
          if (d[j] > 0) pos.push_back(j);
          if (d[j] < 0) neg.push_back(j);
        }
        if (pos.size() != 1 || neg.size() != 1) continue;
        trade_vars.emplace_back(pos[0], neg[0]);
        trade_weights.emplace_back(-d[neg[0]], d[pos[0]]);
      }
  }
  std::bernoulli_distribution coin(0.5);
  static const Rational kBase[] = {Rational(1, 2), Rational(1), Rational(3, 2)};
  std::uniform_int_distribution<int> base_index(0, 2);

  std::vector<PathSpec> paths;
  for (int i = 0; i < n_paths; ++i) {
    PathSpec p;
    std::vector<Rational> q;
    for (size_t j = 0; j < vars.size(); ++j) q.push_back(kPowers[power_index(rng)]);
    if (i % 3 == 1 && !trade_vars.empty() && coin(rng)) {
      std::uniform_int_distribution<size_t> pick(0, trade_vars.size() - 1);
      size_t k = pick(rng);
      auto [wi, wj] = trade_weights[k];
      Rational s = kBase[base_index(rng)] / std::min(wi, wj);
      q[trade_vars[k].first] = s * wi;
      q[trade_vars[k].second] = s * wj;
    }
    for (size_t j = 0; j < vars.size(); ++j) {
      const auto& v = vars[j];
      Expr offset;
      switch (i % 3) {
        case 0: offset = Expr::constant(nonzero()) * t; break;
        case 1: offset = Expr::constant(nonzero()) * pow(t, q[j]); break;
        default: offset = Expr::constant(nonzero()) * t + Expr::constant(nonzero()) * pow(t, Rational(2)); break;
      }
      auto it = point.find(v);
      Rational c = it == point.end() ? Rational(0) : it->second;
      p.param[v] = Expr::constant(c) + offset;
    }
    static const char* const kinds[] = {"line", "monomial", "quadratic"};
    p.label = std::string(kinds[i % 3]) + " " + describe(p.param);
    paths.push_back(std::move(p));
  }
  return estimate_paths(num, den, paths, options);
}

double finite_difference_check(const Expr& e, const std::vector<std::string>& vars,
                               const std::vector<Rational>& direction,
                               const std::vector<std::vector<double>>& points) {
  const Expr d = directional_derivative(e, vars, direction);
  const HiFloat h = hi(Rational(1, 100000));
  double worst = 0.0;
  for (const auto& pt : points) {
    if (pt.size() != vars.size()) throw std::invalid_argument("sample point has the wrong dimension");
    HiMap at, plus, minus;
    for (size_t j = 0; j < vars.size(); ++j) {
      HiFloat x(pt[j]);
      HiFloat step = h * hi(direction[j]);
      at[vars[j]] = x;
      plus[vars[j]] = x + step;
      minus[vars[j]] = x - step;
    }
    auto exact = eval_hi(d, at);
    auto fp = eval_hi(e, plus);
    auto fm = eval_hi(e, minus);
    if (!exact || !fp || !fm) continue;
    HiFloat central = (*fp - *fm) / (2 * h);
    double a = exact->convert_to<double>();
    double dev = std::fabs((central - *exact).convert_to<double>()) / std::max(std::fabs(a), 1e-3);
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace mvlim

#include "mvlim/resolver.hpp"

#include "mvlim/calculus.hpp"

#include <stdexcept>

namespace mvlim {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Auto: return "auto";
    case Mode::Nonisolated: return "nonisolated";
    case Mode::Isolated: return "isolated";
    case Mode::Probe: return "probe";
  }
  return "auto";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::Auto, Mode::Nonisolated, Mode::Isolated, Mode::Probe})
    if (text == to_string(m)) return m;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

RouteDecision detect_route(const LimitProblem& problem) {
  RouteDecision out;
  if (auto spec = detect_zero_set(problem)) {
    out.nonisolated = true;
    out.detected = spec;
    out.reason = "denominator has the form phi(a) - phi(b)";
    return out;
  }
  bool pos = false, neg = false;
  for (const auto& x : ball_samples(problem.vars, problem.point, Rational(1, 8), 4096)) {
    auto v = evaluate<double>(problem.denominator, x);
    if (!v) continue;
    if (*v == 0) {
      out.nonisolated = true;
      out.reason = "denominator vanishes at a sample point near p";
      return out;
    }
    (*v > 0 ? pos : neg) = true;
    if (pos && neg) {
      out.nonisolated = true;
      out.reason = "denominator changes sign near p";
      return out;
    }
  }
  out.reason = "no zero of the denominator found near p";
  return out;
}

Resolution resolve(const LimitProblem& problem, const ResolveOptions& options) {
  problem.validate();
  bool nonisolated = options.mode == Mode::Nonisolated;
  std::optional<ZeroSetSpec> spec = options.zero_set;
  std::string route;
  if (options.mode == Mode::Auto) {
    if (spec) {
      nonisolated = true;
      route = "zero set supplied";
    } else {
      RouteDecision d = detect_route(problem);
      nonisolated = d.nonisolated;
      spec = d.detected;
      route = d.reason;
    }
  } else if (options.mode == Mode::Probe) {
    throw std::invalid_argument("probe mode does not resolve");
  } else {
    route = "mode " + to_string(options.mode) + " requested";
  }

  Resolution res;
  if (nonisolated) {
    if (!spec) spec = detect_zero_set(problem);
    TransversalOptions to;
    to.order = options.order;
    to.seed = options.seed;
    res = resolve_nonisolated(problem, spec ? *spec : ZeroSetSpec{}, to);
  } else {
    IsolatedOptions io;
    io.max_decompositions = options.max_decompositions;
    io.order = options.order;
    io.seed = options.seed;
    for (auto h : options.hints) {
      for (auto& u : h.u) u = translate_to_origin(u, problem.point);
      h.residual = translate_to_origin(h.residual, problem.point);
      io.hints.push_back(std::move(h));
    }
    res = resolve_isolated(problem, io);
  }
  Certificate routed;
  routed.add("route", to_string(options.mode), (nonisolated ? "nonisolated: " : "isolated: ") + route,
             options.mode == Mode::Auto && !options.zero_set ? StepStatus::CheckedNumerically : StepStatus::Assumed);
  routed.append(res.certificate);
  res.certificate = std::move(routed);
  return res;
}

}  // namespace mvlim

#pragma once

#include "mvlim/isolated.hpp"
#include "mvlim/transversal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvlim {

enum class Mode { Auto, Nonisolated, Isolated, Probe };

std::string to_string(Mode m);
/// "auto", "nonisolated", "isolated", "probe"; throws std::invalid_argument.
Mode parse_mode(const std::string& text);

struct ResolveOptions {
  Mode mode = Mode::Auto;
  std::optional<ZeroSetSpec> zero_set;
  std::vector<SquareDecomposition> hints;  // in the original coordinates
  size_t max_decompositions = 16;
  std::optional<Rational> order;
  std::uint64_t seed = 0;
};

struct RouteDecision {
  bool nonisolated = false;
  std::string reason;
  std::optional<ZeroSetSpec> detected;
};

/// The pattern detector first, then a sign change or an exact zero of g
/// among 4096 quasi-random points of the punctured ball of radius 1/8.
RouteDecision detect_route(const LimitProblem& problem);

Resolution resolve(const LimitProblem& problem, const ResolveOptions& options = {});

}  // namespace mvlim

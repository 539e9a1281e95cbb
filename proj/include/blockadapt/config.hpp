#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blockadapt/block.hpp"

namespace blockadapt {

/// Operator descriptor as it appears in config files. "nodes" applies to the
/// lagrange/boundary variants, "space" to l2.
struct OperatorConfig {
  std::string variant = "lagrange";  // lagrange | l2 | boundary
  std::string nodes = "equispaced";  // equispaced | chebyshev
  int k = 1;
  std::string space = "Pk";  // Pk | PkStar | PkStarStar
};

/// Declarative experiment description; JSON on disk. Unknown keys are
/// rejected, and a parsed config re-serializes to the same document.
struct ExperimentConfig {
  OperatorConfig op;
  std::string function = "quad_aniso";
  double p = std::numeric_limits<double>::infinity();  // "inf" in JSON
  std::optional<std::vector<double>> domain_lo;
  std::optional<std::vector<double>> domain_hi;
  std::string kind = "adaptive-cf";
  std::vector<long long> budgets = {100, 400, 1600, 6400};
  double M = 8.0;
  std::string weight = "unit";
  int quad_order = 20;
  int grid_points = 33;
  std::string out;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
};

}  // namespace blockadapt

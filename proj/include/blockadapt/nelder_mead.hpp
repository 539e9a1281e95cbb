#pragma once

#include <functional>
#include <vector>

namespace blockadapt {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
};

struct NelderMeadOptions {
  double initial_step = 0.5;
  double f_rel_tol = 1e-8;
  int max_evals = 2000;
};

/// Deterministic Nelder-Mead simplex minimization in n >= 1 dimensions.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt = {});

}  // namespace blockadapt

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockadapt/block.hpp"
#include "blockadapt/kfun.hpp"
#include "blockadapt/norms.hpp"
#include "blockadapt/polynomial.hpp"

namespace blockadapt {

/// Study function with a closed-form partial-derivative oracle. Derivatives
/// always come from the oracle, never from differencing; the finite-difference
/// comparison lives in the tests as a sanity gate only.
struct CorpusFunction {
  std::string name;
  int dim = 1;
  Block domain;
  RealFn f;
  DerivOracle deriv;
  int max_order = 4;
  /// Exact polynomial form when the entry is a polynomial; enables the
  /// coefficient-exact residual path in the studies.
  std::optional<Polynomial> poly{};

  /// d^alpha f(x) with the order bound enforced.
  double derivative(const MultiIndex& a, const double* x) const;
  /// m-th degree Taylor polynomial of f at x.
  Polynomial taylor(const std::vector<double>& x, int m) const;
  /// Homogeneous degree-m component of the Taylor polynomial at x.
  HomogeneousPoly pi_at(const std::vector<double>& x, int m) const;
};

/// The shipped corpus (order-4 oracles throughout).
const std::vector<CorpusFunction>& corpus();
const CorpusFunction& corpus_function(const std::string& name);

/// Named positive weights; scale multiplies the weight by a constant.
WeightFn weight_by_name(const std::string& name, double scale = 1.0);
std::vector<std::string> weight_names();

}  // namespace blockadapt

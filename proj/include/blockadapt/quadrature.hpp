#pragma once

#include <vector>

#include "blockadapt/block.hpp"

namespace blockadapt {

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const Quadrature1D& gauss_legendre(int q);

/// Tensor Gauss-Legendre rule on a block; weights sum to |R| and the rule
/// integrates per-axis degree <= 2q-1 exactly.
class QuadratureRule {
 public:
  QuadratureRule(const Block& R, int q);

  std::size_t size() const { return count_; }
  int dim() const { return static_cast<int>(axis_nodes_.size()); }
  /// Writes the coordinates of point i into out[0..d).
  void point(std::size_t i, double* out) const;
  double weight(std::size_t i) const;

 private:
  std::vector<std::vector<double>> axis_nodes_;
  std::vector<std::vector<double>> axis_weights_;
  std::size_t count_;
};

}  // namespace blockadapt

#pragma once

#include <functional>
#include <limits>
#include <string>

#include "blockadapt/block.hpp"
#include "blockadapt/quadrature.hpp"

namespace blockadapt {

class ProjectionOperator;

/// Pointwise evaluable function of d coordinates.
using RealFn = std::function<double(const double*)>;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Positive weight function on the study domain.
struct WeightFn {
  std::string name;
  RealFn fn;
};

struct NormOptions {
  int quad_order = 20;   // per axis, for p < infinity
  int grid_points = 33;  // per axis, for p = infinity (refined once to 2n-1)
};

/// L_p(R) norm of g. For p < infinity: tensor Gauss-Legendre of the given
/// order. For p = infinity: max over a uniform grid, refined once (the grid
/// is nested so the refined estimate dominates); a lower estimate of the
/// true sup.
double lp_norm(const RealFn& g, const Block& R, double p, const NormOptions& opt = {});

/// ||g Omega||_{L_p(R)}. Errors if Omega <= 0 at a sampled point.
double lp_norm_weighted(const RealFn& g, const Block& R, double p, const WeightFn& w,
                        const NormOptions& opt = {});

/// Global projection error ||f - I_P f||_{L_p(domain, [Omega])}: per-cell
/// transferred-operator residual norms combined over the partition
/// (p-sum for p < infinity, max for p = infinity). Cells are evaluated by a
/// parallel map; the reduction runs in fixed cell order (Kahan-compensated).
double partition_error(const RealFn& f, const ProjectionOperator& op,
                       const BlockPartition& P, double p, const WeightFn* w = nullptr,
                       const NormOptions& opt = {});

/// Plain serial reference of partition_error, kept for testing the parallel
/// kernel against; identical arithmetic and reduction order.
double partition_error_ref(const RealFn& f, const ProjectionOperator& op,
                           const BlockPartition& P, double p, const WeightFn* w = nullptr,
                           const NormOptions& opt = {});

class Polynomial;

/// Exact-residual variant for polynomial inputs: per-cell residuals are
/// computed in coefficient arithmetic, so the result carries no sampling
/// noise from evaluating f itself.
double partition_error_poly(const Polynomial& f, const ProjectionOperator& op,
                            const BlockPartition& P, double p,
                            const WeightFn* w = nullptr, const NormOptions& opt = {});

double partition_error_poly_ref(const Polynomial& f, const ProjectionOperator& op,
                                const BlockPartition& P, double p,
                                const WeightFn* w = nullptr,
                                const NormOptions& opt = {});

}  // namespace blockadapt

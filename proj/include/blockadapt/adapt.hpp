#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "blockadapt/block.hpp"
#include "blockadapt/corpus.hpp"
#include "blockadapt/kfun.hpp"
#include "blockadapt/norms.hpp"
#include "blockadapt/operator.hpp"

namespace blockadapt {

/// Map x -> target block shape (centered at the origin; only the shape
/// matters), defined on a domain block.
struct LocalBlockSpec {
  std::function<Block(const double*)> shape;
  Block domain;
  /// Sup of diam(R(x)) over the validation sample grid; NaN until validate()
  /// has run.
  double recorded_sup_diam = std::numeric_limits<double>::quiet_NaN();

  /// Samples a uniform grid, checks volumes are positive and records the
  /// diameter sup.
  double validate(int pts_per_axis = 33);
};

/// How tiles meet the coarse-cell boundary.
///  - Clip: tiles are exact translates; boundary fragments are clipped and
///    subdivided (max(1, floor(ln n)) pieces per axis).
///  - Fit: per-axis tile counts are rounded and tiles stretch by at most
///    1/(2c) so each coarse cell is tiled exactly, with no fragments.
enum class TilePolicy { Clip, Fit };

struct AdaptivePartition {
  BlockPartition partition;
  std::vector<std::size_t> part1;  // cell ids following the specification
  std::vector<std::size_t> part2;  // boundary-fragment cell ids
  int n = 0;
  TilePolicy policy = TilePolicy::Clip;
  /// Coarse-cell barycenter governing each cell (index into q_centers).
  std::vector<std::size_t> owner;
  std::vector<std::vector<double>> q_centers;
  double part1_max_diam = 0.0;
  double part2_max_diam = 0.0;
  /// Largest per-axis relative stretch applied by the Fit policy.
  double max_stretch = 0.0;
};

/// Standard partition of R0 into n^d congruent cells.
BlockPartition uniform_partition(const Block& R0, int n);

/// Two-scale construction: coarse n^d grid, each coarse cell tiled by
/// translates of n^{-2} R(x_Q).
AdaptivePartition build_adaptive(const LocalBlockSpec& spec, int n,
                                 TilePolicy policy = TilePolicy::Clip);

/// Largest construction index n with #(P_n) <= N; errors when even P_2 is
/// over budget.
AdaptivePartition partition_for_budget(const LocalBlockSpec& spec, long long N,
                                       TilePolicy policy = TilePolicy::Clip);

/// Block specification from the diameter-capped error function:
/// R_M(x) = (K_M(pi_x) + 1/M)^{-tau/d} R_M^*(x). Evaluations are memoized
/// per sample point.
LocalBlockSpec spec_from_km(const CorpusFunction& f, const ProjectionOperator& op,
                            double p, double M, const KOptions& opt = {});

/// Block specification from the closed-form error function:
/// R(x) = K(pi_x)^{-tau/d} (det D(x))^{1/(md)} D(x)^{-1/m} R_eps, optionally
/// carrying the weight factor Omega(x)^{-tau/d}. Errors when K vanishes
/// somewhere on the sample grid or a pure-power coefficient changes sign.
LocalBlockSpec spec_from_closed_form(const CorpusFunction& f, const ProjectionOperator& op,
                                     double p, const WeightFn* weight = nullptr,
                                     const KOptions& opt = {});

}  // namespace blockadapt

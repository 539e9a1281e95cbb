#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blockadapt/block.hpp"
#include "blockadapt/norms.hpp"
#include "blockadapt/polynomial.hpp"

namespace blockadapt {

enum class OperatorVariant { LagrangeTensor, L2Proj, BoundaryLattice };
enum class NodeKind { Equispaced, Chebyshev };

/// k+1 distinct interpolation abscissae inside I = [-1/2, 1/2].
struct NodeSet {
  std::vector<double> values;  // sorted ascending
};

/// Equispaced: {-1/2 + n/k}; Chebyshev: {cos(n pi / k) / 2}. k = 0 is the
/// midpoint convention for equispaced and an error for Chebyshev.
NodeSet lagrange_nodes(int k, NodeKind kind);

/// Continuous linear projector on C0(I^d) with a polynomial image:
/// tensor Lagrange interpolation on U_k^d, L2(I^d) orthogonal projection
/// onto one of the polynomial spaces, or interpolation into P_k^* at a
/// boundary-first subset of the lattice U_k^d.
class ProjectionOperator {
 public:
  static ProjectionOperator lagrange(int d, int k, NodeKind nodes);
  static ProjectionOperator l2(int d, int k, SpaceKind space);
  static ProjectionOperator boundary_lattice(int d, int k,
                                             NodeKind nodes = NodeKind::Equispaced);
  /// Parses "lagrange:equispaced:k=1:d=2", "l2:Pk:k=1:d=2",
  /// "boundary:chebyshev:k=2:d=2".
  static ProjectionOperator from_descriptor(const std::string& desc);

  int dim() const;
  int wave() const;  // the k the operator was built with
  OperatorVariant variant() const;
  std::string descriptor() const;

  /// Exact action on a polynomial input. The part of the input spanned by
  /// reproduced monomials passes through untouched, so residuals f - I(f)
  /// are conditioned at the scale of the non-reproduced remainder.
  Polynomial apply_poly(const Polynomial& f) const;
  /// f - I(f) with the reproduced part cancelled symbolically; carries no
  /// rounding at the magnitude of f itself.
  Polynomial residual_poly(const Polynomial& f) const;
  /// Action on a sampled function; inner products by tensor Gauss-Legendre
  /// of the given order where needed. The image is always a polynomial.
  Polynomial apply_fn(const RealFn& f, int quad_order = 20) const;

  /// Transferred operator I_R f = I(f o phi) o phi^{-1}, returned in the
  /// coordinates of R.
  Polynomial apply_on_block_poly(const Polynomial& f, const Block& R) const;
  RealFn apply_on_block_fn(const RealFn& f, const Block& R, int quad_order = 20) const;

  /// Largest k' <= k_max with all monomials of total degree <= k' reproduced
  /// to 1e-10 sup-norm on a 17^d grid (doubled once on failure).
  int detect_k(int k_max = 8, double tol = 1e-10) const;

  struct Hypotheses {
    bool h_pm = false;         // I(f o D) = I(f) o D for sign-flip D
    bool h_sigma = false;      // commutation with coordinate permutations
    bool h_star = false;       // P_k^* inside the reproduced space
    bool h_star_star = false;  // no nontrivial pure-power combination reproduced
  };
  Hypotheses check_hypotheses() const;

  /// Lower estimate of the operator norm C_I. Exact Lebesgue-constant
  /// maximization for the Lagrange variant; sampled lower bound otherwise.
  double operator_norm_estimate() const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  explicit ProjectionOperator(std::shared_ptr<const Impl> impl);
  Polynomial apply_poly_raw(const Polynomial& f) const;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace blockadapt

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "blockadapt/multi_index.hpp"

namespace blockadapt {

/// Sparse multivariate polynomial: finite map multi-index -> coefficient.
/// Exact zero coefficients are never stored; iteration order is the
/// lexicographic order on multi-indices, so every reduction over terms is
/// deterministic.
class Polynomial {
 public:
  explicit Polynomial(int dim);
  static Polynomial constant(int dim, double c);
  static Polynomial monomial(const MultiIndex& a, double c);
  /// The coordinate polynomial X_axis in dimension dim.
  static Polynomial variable(int dim, int axis);

  int dim() const { return dim_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Max |alpha| over stored terms; -1 for the zero polynomial.
  int degree() const;
  /// Max per-axis exponent over stored terms; -1 for the zero polynomial.
  int max_axis_degree() const;

  double coeff(const MultiIndex& a) const;
  void set(const MultiIndex& a, double c);
  void add(const MultiIndex& a, double c);

  double eval(const double* x) const;
  double eval(const std::vector<double>& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  Polynomial operator*(const Polynomial& o) const;

  /// p(D x) for a non-negative diagonal scale D; exact on the coefficients.
  Polynomial compose_diag(const std::vector<double>& D) const;
  /// p(diag(eps) x) with eps_i in {-1,+1}.
  Polynomial compose_signs(const std::vector<int>& eps) const;
  /// p(s x + t): per-axis affine substitution.
  Polynomial compose_affine_diag(const std::vector<double>& scale,
                                 const std::vector<double>& shift) const;
  /// p(x_{perm(1)}, ..., x_{perm(d)}): variable relabeling X_i -> X_perm[i].
  Polynomial permute_vars(const std::vector<int>& perm) const;

  /// Sum of the terms with |alpha| = m exactly.
  Polynomial homogeneous_part(int m) const;

  /// Largest absolute coefficient difference against another polynomial.
  double coeff_distance(const Polynomial& o) const;

 private:
  int dim_;
  std::map<MultiIndex, double> terms_;
};

/// The three polynomial spaces over dimension d at wave k.
enum class SpaceKind { Pk, PkStar, PkStarStar };

struct PolySpace {
  SpaceKind kind;
  int k;
  int d;

  /// Basis multi-indices in lexicographic order.
  std::vector<MultiIndex> basis() const;
  /// Closed-form dimension of the space.
  long long dimension() const;
  bool contains(const MultiIndex& a) const;
};

std::vector<MultiIndex> space_basis(const PolySpace& s);

/// Exact partial-derivative oracle: alpha, x -> d^alpha f(x).
using DerivOracle = std::function<double(const MultiIndex&, const double*)>;

/// m-th degree Taylor polynomial of f at x, expanded to monomial form.
Polynomial taylor_poly(const DerivOracle& deriv, const std::vector<double>& x, int m);

}  // namespace blockadapt

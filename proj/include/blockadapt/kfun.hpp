#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockadapt/norms.hpp"
#include "blockadapt/operator.hpp"
#include "blockadapt/polynomial.hpp"

namespace blockadapt {

/// A polynomial all of whose terms have total degree m exactly.
struct HomogeneousPoly {
  Polynomial poly;
  int m;

  HomogeneousPoly(Polynomial p, int order);
  int dim() const { return poly.dim(); }
  /// Coefficients lambda_i of the pure powers X_i^m (possibly zero).
  std::vector<double> pure_power_coeffs() const;
};

/// Geometric mean of the |lambda_i|.
double k_star(const HomogeneousPoly& pi);
/// Number of strictly positive lambda_i.
int signature(const HomogeneousPoly& pi);

enum class KMethod { Numeric, ClosedForm };

struct KResult {
  double value = 0.0;
  /// Minimizing unit-determinant scales, when attained.
  std::vector<double> scales;
  /// True when the infimum is 0 approached at the scale-box boundary.
  bool degenerate = false;
  KMethod method = KMethod::Numeric;
  /// Spread of the per-start minima (numeric method only).
  double starts_spread = 0.0;
};

struct KOptions {
  double box = 6.0;        // |t_i| <= box in the log-scale parameterization
  double f_rel_tol = 1e-8;
  int max_evals = 2000;
  NormOptions norms;
};

/// ||f - I f||_{L_p(I^d)}.
double residual_norm(const ProjectionOperator& op, const Polynomial& f, double p,
                     const NormOptions& opt = {});

/// The error function: infimum of ||pi o D - I(pi o D)||_{L_p(I^d)} over
/// positive diagonal D with det D = 1, by multi-start Nelder-Mead in
/// log-scale coordinates. d = 1 has no free scale and returns the residual
/// norm directly.
KResult k_numeric(const ProjectionOperator& op, const HomogeneousPoly& pi, double p,
                  const KOptions& opt = {});

/// Same infimum restricted to scales with ||D||_2 (the image diameter) <= M.
/// Requires M >= sqrt(d).
KResult k_modified(const ProjectionOperator& op, const HomogeneousPoly& pi, double p,
                   double M, const KOptions& opt = {});

/// C(p) = ||sum_i (X_i^m - I X_i^m)||_p for odd m; requires the sign-flip,
/// permutation and star hypotheses.
double c_odd(const ProjectionOperator& op, double p, const NormOptions& opt = {});

/// C(p, s) for even m; s in {0, d} uses the direct norm formula, the other
/// signatures run the numeric scale optimization. Requires the permutation,
/// star and pure-power hypotheses.
double c_even(const ProjectionOperator& op, double p, int s, const KOptions& opt = {});

/// C(p) K_*(pi) for odd m or C(p, s(pi)) K_*(pi) for even m; constants are
/// cached per (operator, p, s). Errors when the hypotheses fail.
KResult k_closed_form(const ProjectionOperator& op, const HomogeneousPoly& pi, double p,
                      const KOptions& opt = {});

struct ScalingCheck {
  bool pass = false;
  double lhs = 0.0;   // K(pi o D)
  double rhs = 0.0;   // (det D)^{m/d} K(pi)
  double rel_diff = 0.0;
};

/// Checks K(pi o D) = (det D)^{m/d} K(pi) for a positive diagonal D.
ScalingCheck verify_scaling(const ProjectionOperator& op, const HomogeneousPoly& pi,
                            double p, const std::vector<double>& D,
                            const KOptions& opt = {});

/// Process-wide cache for the closed-form constants, optionally persisted to
/// $BLOCKADAPT_CACHE_DIR/constants.json.
class ConstantCache {
 public:
  static ConstantCache& instance();
  std::optional<double> get(const std::string& key);
  void put(const std::string& key, double value);
  long long hits() const;
  long long misses() const;
  std::string storage_path() const;

 private:
  ConstantCache();
  struct State;
  State* state_;
};

}  // namespace blockadapt

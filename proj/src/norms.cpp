#include "blockadapt/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockadapt/operator.hpp"
#include "blockadapt/parallel.hpp"

namespace blockadapt {

namespace {

std::string point_str(const double* x, int d) {
  std::string s = "(";
  for (int i = 0; i < d; ++i) {
    if (i) s += ", ";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

double grid_max_abs(const RealFn& g, const Block& R, int pts) {
  const int d = R.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(pts);
  std::vector<double> x(static_cast<std::size_t>(d));
  double m = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      std::size_t j = rest % static_cast<std::size_t>(pts);
      rest /= static_cast<std::size_t>(pts);
      x[static_cast<std::size_t>(a)] =
          R.lo(a) + (R.hi(a) - R.lo(a)) * static_cast<double>(j) / (pts - 1);
    }
    double v = g(x.data());
    if (!std::isfinite(v))
      throw std::runtime_error("lp_norm: non-finite value at " + point_str(x.data(), d));
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace

double lp_norm(const RealFn& g, const Block& R, double p, const NormOptions& opt) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  if (std::isinf(p)) {
    const int coarse = std::max(2, opt.grid_points);
    const double m1 = grid_max_abs(g, R, coarse);
    const double m2 = grid_max_abs(g, R, 2 * coarse - 1);  // nested refinement
    if (m2 > 0.0 && (m2 - m1) / m2 > 0.005) return m2;
    return m2;  // grids are nested, so m2 >= m1 always
  }
  if (opt.quad_order < 1) throw std::invalid_argument("lp_norm: quadrature order must be >= 1");
  QuadratureRule rule(R, opt.quad_order);
  std::vector<double> x(static_cast<std::size_t>(R.dim()));
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.point(i, x.data());
    double v = g(x.data());
    if (!std::isfinite(v))
      throw std::runtime_error("lp_norm: non-finite value at " + point_str(x.data(), R.dim()));
    double term = rule.weight(i) * std::pow(std::abs(v), p);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::pow(sum, 1.0 / p);
}

double lp_norm_weighted(const RealFn& g, const Block& R, double p, const WeightFn& w,
                        const NormOptions& opt) {
  RealFn wg = [&g, &w, d = R.dim()](const double* x) {
    double om = w.fn(x);
    if (!(om > 0.0))
      throw std::runtime_error("lp_norm_weighted: weight is not positive at " +
                               point_str(x, d));
    return g(x) * om;
  };
  return lp_norm(wg, R, p, opt);
}

namespace {

// Flattened polynomial for the per-cell residual loops; map traversal is too
// slow at ~10^8 evaluations per study.
struct FlatPoly {
  int d = 0;
  std::vector<double> coeff;
  std::vector<int> exps;  // coeff.size() * d entries

  explicit FlatPoly(const Polynomial& p) : d(p.dim()) {
    for (const auto& [a, c] : p.terms()) {
      coeff.push_back(c);
      for (int i = 0; i < d; ++i) exps.push_back(a[i]);
    }
  }

  double eval(const double* x) const {
    double s = 0.0;
    const int* e = exps.data();
    for (std::size_t t = 0; t < coeff.size(); ++t, e += d) {
      double v = coeff[t];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < e[i]; ++j) v *= x[i];
      s += v;
    }
    return s;
  }
};

constexpr int kMaxDim = 16;

double cell_error(const RealFn& f, const ProjectionOperator& op, const Block& cell,
                  double p, const WeightFn* w, const NormOptions& opt) {
  const int d = cell.dim();
  if (d > kMaxDim) throw std::invalid_argument("partition_error: dimension too large");
  const BlockMap phi = normalize(cell);
  RealFn pulled = [&f, &phi](const double* u) {
    double x[kMaxDim];
    phi.forward(u, x);
    return f(x);
  };
  const FlatPoly mu(op.apply_fn(pulled, opt.quad_order));
  RealFn residual = [&f, &phi, &mu](const double* x) {
    double u[kMaxDim];
    phi.inverse(x, u);
    return f(x) - mu.eval(u);
  };
  return w ? lp_norm_weighted(residual, cell, p, *w, opt)
           : lp_norm(residual, cell, p, opt);
}

double combine(const std::vector<double>& errs, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double e : errs) m = std::max(m, e);
    return m;
  }
  double sum = 0.0, comp = 0.0;
  for (double e : errs) {
    double term = std::pow(e, p);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace

double partition_error(const RealFn& f, const ProjectionOperator& op,
                       const BlockPartition& P, double p, const WeightFn* w,
                       const NormOptions& opt) {
  std::vector<double> errs(P.size());
  parallel_for(P.size(), [&](std::size_t i) {
    errs[i] = cell_error(f, op, P.cell(i), p, w, opt);
  });
  return combine(errs, p);
}

double partition_error_ref(const RealFn& f, const ProjectionOperator& op,
                           const BlockPartition& P, double p, const WeightFn* w,
                           const NormOptions& opt) {
  std::vector<double> errs(P.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    errs[i] = cell_error(f, op, P.cell(i), p, w, opt);
  return combine(errs, p);
}

namespace {

double cell_error_poly(const Polynomial& f, const ProjectionOperator& op,
                       const Block& cell, double p, const WeightFn* w,
                       const NormOptions& opt) {
  const BlockMap phi = normalize(cell);
  Polynomial pulled = f.compose_affine_diag(phi.scale, phi.center);
  const FlatPoly res(op.residual_poly(pulled));
  RealFn residual = [&res, &phi](const double* x) {
    double u[kMaxDim];
    phi.inverse(x, u);
    return res.eval(u);
  };
  return w ? lp_norm_weighted(residual, cell, p, *w, opt)
           : lp_norm(residual, cell, p, opt);
}

}  // namespace

double partition_error_poly(const Polynomial& f, const ProjectionOperator& op,
                            const BlockPartition& P, double p, const WeightFn* w,
                            const NormOptions& opt) {
  std::vector<double> errs(P.size());
  parallel_for(P.size(), [&](std::size_t i) {
    errs[i] = cell_error_poly(f, op, P.cell(i), p, w, opt);
  });
  return combine(errs, p);
}

double partition_error_poly_ref(const Polynomial& f, const ProjectionOperator& op,
                                const BlockPartition& P, double p, const WeightFn* w,
                                const NormOptions& opt) {
  std::vector<double> errs(P.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    errs[i] = cell_error_poly(f, op, P.cell(i), p, w, opt);
  return combine(errs, p);
}

}  // namespace blockadapt

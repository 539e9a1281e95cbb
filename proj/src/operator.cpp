#include "blockadapt/operator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "blockadapt/quadrature.hpp"

namespace blockadapt {

NodeSet lagrange_nodes(int k, NodeKind kind) {
  if (k < 0) throw std::invalid_argument("lagrange_nodes: k must be >= 0");
  NodeSet s;
  if (kind == NodeKind::Equispaced) {
    if (k == 0) {
      s.values = {0.0};  // midpoint convention keeps the symmetry hypotheses
      return s;
    }
    for (int n = 0; n <= k; ++n)
      s.values.push_back(-0.5 + static_cast<double>(n) / static_cast<double>(k));
  } else {
    if (k == 0) throw std::invalid_argument("lagrange_nodes: Chebyshev requires k >= 1");
    for (int n = 0; n <= k; ++n) s.values.push_back(0.5 * std::cos(n * M_PI / k));
    std::sort(s.values.begin(), s.values.end());
  }
  for (double v : s.values)
    if (v < -0.5 - 1e-15 || v > 0.5 + 1e-15)
      throw std::invalid_argument("lagrange_nodes: node outside the canonical interval");
  for (std::size_t i = 1; i < s.values.size(); ++i)
    if (!(s.values[i - 1] < s.values[i]))
      throw std::invalid_argument("lagrange_nodes: nodes must be distinct");
  return s;
}

namespace {

// 1-D Lagrange basis polynomial through `nodes`, centered on nodes[j],
// expanded in the monomial basis of variable `axis`.
Polynomial lagrange_basis_1d(int dim, int axis, const std::vector<double>& nodes,
                             std::size_t j) {
  Polynomial p = Polynomial::constant(dim, 1.0);
  const Polynomial x = Polynomial::variable(dim, axis);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (v == j) continue;
    Polynomial factor = x;
    factor += Polynomial::constant(dim, -nodes[v]);
    factor *= 1.0 / (nodes[j] - nodes[v]);
    p = p * factor;
  }
  return p;
}

// Exact integral of X^a over I = [-1/2, 1/2].
double monomial_integral_1d(int a) {
  if (a % 2 == 1) return 0.0;
  return std::pow(0.5, a) / (a + 1);
}

double monomial_integral(const MultiIndex& a) {
  double v = 1.0;
  for (int i = 0; i < a.dim(); ++i) v *= monomial_integral_1d(a[i]);
  return v;
}

// Exact integral of a polynomial over I^d.
double poly_integral_unit(const Polynomial& p) {
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) s += c * monomial_integral(a);
  return s;
}

// Legendre polynomial P_n(2x) on I as a univariate coefficient list, built
// from the standard recurrence.
std::vector<double> shifted_legendre_coeffs(int n) {
  std::vector<std::vector<double>> P;
  P.push_back({1.0});
  if (n >= 1) P.push_back({0.0, 1.0});
  for (int m = 2; m <= n; ++m) {
    std::vector<double> next(static_cast<std::size_t>(m) + 1, 0.0);
    for (std::size_t j = 0; j < P[static_cast<std::size_t>(m - 1)].size(); ++j)
      next[j + 1] += (2.0 * m - 1.0) / m * P[static_cast<std::size_t>(m - 1)][j];
    for (std::size_t j = 0; j < P[static_cast<std::size_t>(m - 2)].size(); ++j)
      next[j] -= (m - 1.0) / m * P[static_cast<std::size_t>(m - 2)][j];
    P.push_back(std::move(next));
  }
  std::vector<double> c = P[static_cast<std::size_t>(n)];
  double scale = 1.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] *= scale;  // substitute x -> 2x
    scale *= 2.0;
  }
  return c;
}

Polynomial tensor_from_axis_coeffs(int dim, const std::vector<std::vector<double>>& axis) {
  Polynomial p = Polynomial::constant(dim, 1.0);
  for (int i = 0; i < dim; ++i) {
    Polynomial q(dim);
    for (std::size_t j = 0; j < axis[static_cast<std::size_t>(i)].size(); ++j) {
      double c = axis[static_cast<std::size_t>(i)][j];
      if (c == 0.0) continue;
      std::vector<int> e(static_cast<std::size_t>(dim), 0);
      e[static_cast<std::size_t>(i)] = static_cast<int>(j);
      q.add(MultiIndex(e), c);
    }
    p = p * q;
  }
  return p;
}

std::vector<std::vector<double>> lattice_points(const std::vector<double>& nodes, int d) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= nodes.size();
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> p(static_cast<std::size_t>(d));
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      p[static_cast<std::size_t>(a)] = nodes[rest % nodes.size()];
      rest /= nodes.size();
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

struct LU {
  std::vector<std::vector<double>> a;
  std::vector<int> piv;
  int n = 0;

  void factor(std::vector<std::vector<double>> m) {
    a = std::move(m);
    n = static_cast<int>(a.size());
    piv.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) piv[static_cast<std::size_t>(i)] = i;
    for (int c = 0; c < n; ++c) {
      int best = c;
      for (int r = c + 1; r < n; ++r)
        if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
            std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(c)]))
          best = r;
      if (std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(c)]) < 1e-12)
        throw std::runtime_error("singular interpolation system");
      std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(best)]);
      std::swap(piv[static_cast<std::size_t>(c)], piv[static_cast<std::size_t>(best)]);
      for (int r = c + 1; r < n; ++r) {
        double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /
                   a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = f;
        for (int cc = c + 1; cc < n; ++cc)
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
              f * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(piv[static_cast<std::size_t>(i)])];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        x[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j)
        x[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] /= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    return x;
  }
};

}  // namespace

struct ProjectionOperator::Impl {
  OperatorVariant variant;
  NodeKind nodes = NodeKind::Equispaced;
  SpaceKind space = SpaceKind::Pk;
  int d = 1;
  int k = 1;

  // Lagrange tensor data.
  std::vector<double> node_values;
  std::vector<std::vector<double>> node_tuples;   // U_k^d in lex order
  std::vector<Polynomial> tensor_basis;           // mu_u per tuple

  // L2 projection data.
  std::vector<Polynomial> l2_basis;       // shifted-Legendre products
  std::vector<double> l2_inv_sq_norm;     // prod (2 a_i + 1)

  // Boundary-lattice data.
  std::vector<std::vector<double>> bl_points;
  std::vector<MultiIndex> bl_basis;
  LU bl_lu;

  // Monomials spanning the image; the variant reproduces them exactly, so
  // apply_poly passes that part of the input through untouched and only the
  // remainder goes through the numeric action. Keeps residuals of
  // near-reproduced polynomials conditioned at the remainder's scale.
  PolySpace image_space{SpaceKind::Pk, 0, 1};

  mutable std::mutex hyp_mutex;
  mutable std::optional<Hypotheses> hyp_cache;
  mutable std::optional<int> detect_cache;
};

ProjectionOperator::ProjectionOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

int ProjectionOperator::dim() const { return impl_->d; }
int ProjectionOperator::wave() const { return impl_->k; }
OperatorVariant ProjectionOperator::variant() const { return impl_->variant; }

ProjectionOperator ProjectionOperator::lagrange(int d, int k, NodeKind nodes) {
  if (d < 1) throw std::invalid_argument("ProjectionOperator: d must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->variant = OperatorVariant::LagrangeTensor;
  impl->nodes = nodes;
  impl->d = d;
  impl->k = k;
  impl->node_values = lagrange_nodes(k, nodes).values;
  impl->node_tuples = lattice_points(impl->node_values, d);
  const std::size_t per_axis = impl->node_values.size();
  for (std::size_t idx = 0; idx < impl->node_tuples.size(); ++idx) {
    std::vector<std::size_t> which(static_cast<std::size_t>(d));
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      which[static_cast<std::size_t>(a)] = rest % per_axis;
      rest /= per_axis;
    }
    Polynomial mu = Polynomial::constant(d, 1.0);
    for (int a = 0; a < d; ++a)
      mu = mu * lagrange_basis_1d(d, a, impl->node_values, which[static_cast<std::size_t>(a)]);
    impl->tensor_basis.push_back(std::move(mu));
  }
  impl->image_space = PolySpace{SpaceKind::PkStarStar, k, d};
  return ProjectionOperator(std::move(impl));
}

ProjectionOperator ProjectionOperator::l2(int d, int k, SpaceKind space) {
  if (d < 1) throw std::invalid_argument("ProjectionOperator: d must be >= 1");
  if (k < 0) throw std::invalid_argument("ProjectionOperator: k must be >= 0");
  auto impl = std::make_shared<Impl>();
  impl->variant = OperatorVariant::L2Proj;
  impl->space = space;
  impl->d = d;
  impl->k = k;
  PolySpace sp{space, k, d};
  for (const MultiIndex& a : sp.basis()) {
    std::vector<std::vector<double>> axis;
    double inv_norm = 1.0;
    for (int i = 0; i < d; ++i) {
      axis.push_back(shifted_legendre_coeffs(a[i]));
      inv_norm *= 2.0 * a[i] + 1.0;
    }
    impl->l2_basis.push_back(tensor_from_axis_coeffs(d, axis));
    impl->l2_inv_sq_norm.push_back(inv_norm);
  }
  impl->image_space = sp;
  return ProjectionOperator(std::move(impl));
}

ProjectionOperator ProjectionOperator::boundary_lattice(int d, int k, NodeKind nodes) {
  if (d < 1) throw std::invalid_argument("ProjectionOperator: d must be >= 1");
  if (k < 1) throw std::invalid_argument("boundary_lattice: k must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->variant = OperatorVariant::BoundaryLattice;
  impl->nodes = nodes;
  impl->d = d;
  impl->k = k;
  impl->node_values = lagrange_nodes(k, nodes).values;
  PolySpace sp{SpaceKind::PkStar, k, d};
  impl->bl_basis = sp.basis();
  const std::size_t dim_star = impl->bl_basis.size();

  // Candidate lattice points in lex order, boundary points first.
  const double nmin = impl->node_values.front(), nmax = impl->node_values.back();
  auto all = lattice_points(impl->node_values, d);
  std::vector<std::vector<double>> candidates;
  for (const auto& p : all) {
    bool boundary = false;
    for (double v : p) boundary = boundary || v == nmin || v == nmax;
    if (boundary) candidates.push_back(p);
  }
  for (const auto& p : all) {
    bool boundary = false;
    for (double v : p) boundary = boundary || v == nmin || v == nmax;
    if (!boundary) candidates.push_back(p);
  }

  // Greedy selection with an incremental row-echelon rank guard; points whose
  // Vandermonde row is dependent on the accepted ones are skipped.
  std::vector<std::vector<double>> echelon;
  std::vector<std::vector<double>> accepted_rows;
  for (const auto& p : candidates) {
    if (impl->bl_points.size() == dim_star) break;
    std::vector<double> row(dim_star);
    for (std::size_t j = 0; j < dim_star; ++j)
      row[j] = Polynomial::monomial(impl->bl_basis[j], 1.0).eval(p.data());
    std::vector<double> work = row;
    for (const auto& e : echelon) {
      std::size_t lead = 0;
      while (lead < dim_star && e[lead] == 0.0) ++lead;
      if (lead < dim_star && work[lead] != 0.0) {
        double f = work[lead] / e[lead];
        for (std::size_t j = 0; j < dim_star; ++j) work[j] -= f * e[j];
      }
    }
    double nrm = 0.0;
    for (double v : work) nrm = std::max(nrm, std::abs(v));
    if (nrm <= 1e-9) continue;
    echelon.push_back(work);
    accepted_rows.push_back(row);
    impl->bl_points.push_back(p);
  }
  if (impl->bl_points.size() != dim_star)
    throw std::runtime_error("boundary_lattice: could not assemble a unisolvent point set");
  impl->bl_lu.factor(accepted_rows);
  impl->image_space = sp;
  return ProjectionOperator(std::move(impl));
}

namespace {

std::string space_name(SpaceKind s) {
  switch (s) {
    case SpaceKind::Pk: return "Pk";
    case SpaceKind::PkStar: return "PkStar";
    case SpaceKind::PkStarStar: return "PkStarStar";
  }
  return "?";
}

SpaceKind space_from_name(const std::string& s) {
  if (s == "Pk") return SpaceKind::Pk;
  if (s == "PkStar") return SpaceKind::PkStar;
  if (s == "PkStarStar") return SpaceKind::PkStarStar;
  throw std::invalid_argument("unknown polynomial space '" + s + "'");
}

}  // namespace

std::string ProjectionOperator::descriptor() const {
  std::ostringstream os;
  switch (impl_->variant) {
    case OperatorVariant::LagrangeTensor:
      os << "lagrange:" << (impl_->nodes == NodeKind::Equispaced ? "equispaced" : "chebyshev");
      break;
    case OperatorVariant::L2Proj:
      os << "l2:" << space_name(impl_->space);
      break;
    case OperatorVariant::BoundaryLattice:
      os << "boundary:" << (impl_->nodes == NodeKind::Equispaced ? "equispaced" : "chebyshev");
      break;
  }
  os << ":k=" << impl_->k << ":d=" << impl_->d;
  return os.str();
}

ProjectionOperator ProjectionOperator::from_descriptor(const std::string& desc) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : desc) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw std::invalid_argument("operator descriptor must have 4 ':'-separated fields: " + desc);
  auto int_field = [&](const std::string& s, const std::string& key) {
    if (s.rfind(key + "=", 0) != 0)
      throw std::invalid_argument("expected '" + key + "=<int>' in descriptor: " + desc);
    return std::stoi(s.substr(key.size() + 1));
  };
  const int k = int_field(parts[2], "k");
  const int d = int_field(parts[3], "d");
  if (parts[0] == "lagrange" || parts[0] == "boundary") {
    NodeKind nk;
    if (parts[1] == "equispaced")
      nk = NodeKind::Equispaced;
    else if (parts[1] == "chebyshev")
      nk = NodeKind::Chebyshev;
    else
      throw std::invalid_argument("unknown node kind '" + parts[1] + "'");
    return parts[0] == "lagrange" ? lagrange(d, k, nk) : boundary_lattice(d, k, nk);
  }
  if (parts[0] == "l2") return l2(d, k, space_from_name(parts[1]));
  throw std::invalid_argument("unknown operator variant '" + parts[0] + "'");
}

Polynomial ProjectionOperator::apply_poly(const Polynomial& f) const {
  if (f.dim() != impl_->d)
    throw std::invalid_argument("ProjectionOperator::apply_poly: dimension mismatch");
  const Impl& im = *impl_;
  // Reproduced monomials pass through exactly; only the remainder is
  // projected numerically.
  Polynomial low(im.d), high(im.d);
  for (const auto& [a, c] : f.terms())
    (im.image_space.contains(a) ? low : high).add(a, c);
  if (high.is_zero()) return low;
  Polynomial projected = apply_poly_raw(high);
  projected += low;
  return projected;
}

Polynomial ProjectionOperator::residual_poly(const Polynomial& f) const {
  if (f.dim() != impl_->d)
    throw std::invalid_argument("ProjectionOperator::residual_poly: dimension mismatch");
  const Impl& im = *impl_;
  Polynomial high(im.d);
  for (const auto& [a, c] : f.terms())
    if (!im.image_space.contains(a)) high.add(a, c);
  if (high.is_zero()) return high;
  return high - apply_poly_raw(high);
}

Polynomial ProjectionOperator::apply_poly_raw(const Polynomial& f) const {
  const Impl& im = *impl_;
  switch (im.variant) {
    case OperatorVariant::LagrangeTensor: {
      Polynomial r(im.d);
      for (std::size_t i = 0; i < im.node_tuples.size(); ++i) {
        double v = f.eval(im.node_tuples[i].data());
        if (v == 0.0) continue;
        Polynomial t = im.tensor_basis[i];
        t *= v;
        r += t;
      }
      return r;
    }
    case OperatorVariant::L2Proj: {
      Polynomial r(im.d);
      for (std::size_t i = 0; i < im.l2_basis.size(); ++i) {
        double c = poly_integral_unit(f * im.l2_basis[i]) * im.l2_inv_sq_norm[i];
        if (c == 0.0) continue;
        Polynomial t = im.l2_basis[i];
        t *= c;
        r += t;
      }
      return r;
    }
    case OperatorVariant::BoundaryLattice: {
      std::vector<double> rhs(im.bl_points.size());
      for (std::size_t i = 0; i < im.bl_points.size(); ++i)
        rhs[i] = f.eval(im.bl_points[i].data());
      std::vector<double> c = im.bl_lu.solve(rhs);
      Polynomial r(im.d);
      for (std::size_t j = 0; j < im.bl_basis.size(); ++j) r.add(im.bl_basis[j], c[j]);
      return r;
    }
  }
  throw std::logic_error("unreachable");
}

Polynomial ProjectionOperator::apply_fn(const RealFn& f, int quad_order) const {
  const Impl& im = *impl_;
  switch (im.variant) {
    case OperatorVariant::LagrangeTensor: {
      Polynomial r(im.d);
      for (std::size_t i = 0; i < im.node_tuples.size(); ++i) {
        double v = f(im.node_tuples[i].data());
        if (!std::isfinite(v))
          throw std::runtime_error("apply: non-finite sample at an interpolation node");
        if (v == 0.0) continue;
        Polynomial t = im.tensor_basis[i];
        t *= v;
        r += t;
      }
      return r;
    }
    case OperatorVariant::L2Proj: {
      QuadratureRule rule(Block::unit_cube(im.d), quad_order);
      std::vector<double> x(static_cast<std::size_t>(im.d));
      std::vector<double> coeff(im.l2_basis.size(), 0.0);
      for (std::size_t i = 0; i < rule.size(); ++i) {
        rule.point(i, x.data());
        const double wf = rule.weight(i) * f(x.data());
        for (std::size_t j = 0; j < im.l2_basis.size(); ++j)
          coeff[j] += wf * im.l2_basis[j].eval(x.data());
      }
      Polynomial r(im.d);
      for (std::size_t j = 0; j < im.l2_basis.size(); ++j) {
        double c = coeff[j] * im.l2_inv_sq_norm[j];
        if (c == 0.0) continue;
        Polynomial t = im.l2_basis[j];
        t *= c;
        r += t;
      }
      return r;
    }
    case OperatorVariant::BoundaryLattice: {
      std::vector<double> rhs(im.bl_points.size());
      for (std::size_t i = 0; i < im.bl_points.size(); ++i)
        rhs[i] = f(im.bl_points[i].data());
      std::vector<double> c = im.bl_lu.solve(rhs);
      Polynomial r(im.d);
      for (std::size_t j = 0; j < im.bl_basis.size(); ++j) r.add(im.bl_basis[j], c[j]);
      return r;
    }
  }
  throw std::logic_error("unreachable");
}

Polynomial ProjectionOperator::apply_on_block_poly(const Polynomial& f, const Block& R) const {
  const BlockMap phi = normalize(R);
  // f o phi, projected, then composed with phi^{-1}.
  Polynomial pulled = f.compose_affine_diag(phi.scale, phi.center);
  Polynomial proj = apply_poly(pulled);
  std::vector<double> inv_scale(phi.scale.size()), inv_shift(phi.scale.size());
  for (std::size_t i = 0; i < phi.scale.size(); ++i) {
    inv_scale[i] = 1.0 / phi.scale[i];
    inv_shift[i] = -phi.center[i] / phi.scale[i];
  }
  return proj.compose_affine_diag(inv_scale, inv_shift);
}

RealFn ProjectionOperator::apply_on_block_fn(const RealFn& f, const Block& R,
                                             int quad_order) const {
  const BlockMap phi = normalize(R);
  const int d = impl_->d;
  RealFn pulled = [f, phi, d](const double* u) {
    std::vector<double> x(static_cast<std::size_t>(d));
    phi.forward(u, x.data());
    return f(x.data());
  };
  Polynomial proj = apply_fn(pulled, quad_order);
  return [proj, phi, d](const double* x) {
    std::vector<double> u(static_cast<std::size_t>(d));
    phi.inverse(x, u.data());
    return proj.eval(u.data());
  };
}

namespace {

// sup |p| over a uniform n^d grid on I^d.
double grid_sup_unit(const Polynomial& p, int n) {
  const int d = p.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  std::vector<double> x(static_cast<std::size_t>(d));
  double m = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] = -0.5 + static_cast<double>(rest % static_cast<std::size_t>(n)) / (n - 1);
      rest /= static_cast<std::size_t>(n);
    }
    m = std::max(m, std::abs(p.eval(x.data())));
  }
  return m;
}

}  // namespace

int ProjectionOperator::detect_k(int k_max, double tol) const {
  {
    std::lock_guard<std::mutex> lock(impl_->hyp_mutex);
    if (impl_->detect_cache) return *impl_->detect_cache;
  }
  auto reproduced = [&](const MultiIndex& a) {
    Polynomial mono = Polynomial::monomial(a, 1.0);
    Polynomial res = mono - apply_poly(mono);
    if (grid_sup_unit(res, 17) <= tol) return true;
    return grid_sup_unit(res, 34) <= tol;  // rules out grid aliasing
  };
  int result = -1;
  for (int kp = 0; kp <= k_max; ++kp) {
    bool all_ok = true;
    PolySpace sp{SpaceKind::Pk, kp, impl_->d};
    for (const MultiIndex& a : sp.basis()) {
      if (a.order() != kp) continue;  // lower orders already checked
      if (!reproduced(a)) {
        all_ok = false;
        break;
      }
    }
    if (!all_ok) {
      result = kp - 1;
      break;
    }
    if (kp == k_max)
      throw std::runtime_error("detect_k: still reproducing at k_max; increase k_max");
  }
  if (result < 0) throw std::runtime_error("detect_k: constants are not reproduced");
  std::lock_guard<std::mutex> lock(impl_->hyp_mutex);
  impl_->detect_cache = result;
  return result;
}

namespace {

// Deterministic smooth sample functions for the hypothesis checks.
RealFn smooth_sample(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 3.0);
  struct Term {
    std::vector<double> w;
    double a, phase;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (int t = 0; t < 3; ++t) {
    Term tm;
    tm.a = amp(rng);
    tm.phase = amp(rng);
    for (int i = 0; i < d; ++i) tm.w.push_back(freq(rng));
    terms->push_back(tm);
  }
  return [terms, d](const double* x) {
    double s = 0.0;
    for (const auto& t : *terms) {
      double arg = t.phase;
      for (int i = 0; i < d; ++i) arg += t.w[static_cast<std::size_t>(i)] * x[i];
      s += t.a * std::cos(arg);
    }
    return s;
  };
}

double sup_diff_unit(const RealFn& a, const RealFn& b, int d, int n) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  std::vector<double> x(static_cast<std::size_t>(d));
  double m = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int ax = d - 1; ax >= 0; --ax) {
      x[static_cast<std::size_t>(ax)] = -0.5 + static_cast<double>(rest % static_cast<std::size_t>(n)) / (n - 1);
      rest /= static_cast<std::size_t>(n);
    }
    m = std::max(m, std::abs(a(x.data()) - b(x.data())));
  }
  return m;
}

// Smallest eigenvalue of a small symmetric matrix by cyclic Jacobi sweeps.
double smallest_eigenvalue(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
        double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t i = 0; i < n; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
  }
  double m = a[0][0];
  for (std::size_t i = 1; i < n; ++i) m = std::min(m, a[i][i]);
  return m;
}

}  // namespace

ProjectionOperator::Hypotheses ProjectionOperator::check_hypotheses() const {
  {
    std::lock_guard<std::mutex> lock(impl_->hyp_mutex);
    if (impl_->hyp_cache) return *impl_->hyp_cache;
  }
  const int d = impl_->d;
  const int k = impl_->k;
  const double tol = 1e-10;
  Hypotheses h;

  // Test transformations: all 2^d sign flips and all transpositions; those
  // generate the full symmetry groups.
  std::vector<std::vector<int>> flips;
  for (int mask = 1; mask < (1 << d); ++mask) {
    std::vector<int> eps(static_cast<std::size_t>(d), 1);
    for (int i = 0; i < d; ++i)
      if (mask & (1 << i)) eps[static_cast<std::size_t>(i)] = -1;
    flips.push_back(eps);
  }
  std::vector<std::vector<int>> swaps;
  for (int i = 0; i + 1 < d; ++i) {
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) perm[static_cast<std::size_t>(j)] = j;
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
    swaps.push_back(perm);
  }

  PolySpace test_space{SpaceKind::PkStarStar, k + 1, d};
  std::vector<Polynomial> polys;
  for (const MultiIndex& a : test_space.basis()) polys.push_back(Polynomial::monomial(a, 1.0));

  h.h_pm = true;
  h.h_sigma = true;
  for (const Polynomial& f : polys) {
    for (const auto& eps : flips) {
      Polynomial lhs = apply_poly(f.compose_signs(eps));
      Polynomial rhs = apply_poly(f).compose_signs(eps);
      if (grid_sup_unit(lhs - rhs, 17) > tol) h.h_pm = false;
    }
    for (const auto& perm : swaps) {
      Polynomial lhs = apply_poly(f.permute_vars(perm));
      Polynomial rhs = apply_poly(f).permute_vars(perm);
      if (grid_sup_unit(lhs - rhs, 17) > tol) h.h_sigma = false;
    }
    if (!h.h_pm && !h.h_sigma) break;
  }
  // 20 pseudo-random smooth samples through the numeric path.
  for (unsigned s = 0; s < 20 && (h.h_pm || h.h_sigma); ++s) {
    RealFn f = smooth_sample(d, 1234u + s);
    Polynomial pf = apply_fn(f);
    if (h.h_pm) {
      const auto& eps = flips[s % flips.size()];
      RealFn fflip = [f, eps, d](const double* x) {
        std::vector<double> y(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] = eps[static_cast<std::size_t>(i)] * x[i];
        return f(y.data());
      };
      Polynomial lhs = apply_fn(fflip);
      Polynomial rhs = pf.compose_signs(eps);
      if (grid_sup_unit(lhs - rhs, 17) > tol) h.h_pm = false;
    }
    if (h.h_sigma && !swaps.empty()) {
      const auto& perm = swaps[s % swaps.size()];
      RealFn fperm = [f, perm, d](const double* x) {
        std::vector<double> y(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] = x[perm[static_cast<std::size_t>(i)]];
        return f(y.data());
      };
      Polynomial lhs = apply_fn(fperm);
      Polynomial rhs = pf.permute_vars(perm);
      if (grid_sup_unit(lhs - rhs, 17) > tol) h.h_sigma = false;
    }
  }
  if (d == 1) h.h_sigma = true;  // no nontrivial permutations

  // H_*: reproduction of the P_k^* basis.
  h.h_star = true;
  PolySpace star{SpaceKind::PkStar, k, d};
  for (const MultiIndex& a : star.basis()) {
    Polynomial mono = Polynomial::monomial(a, 1.0);
    if (grid_sup_unit(mono - apply_poly(mono), 17) > tol) {
      h.h_star = false;
      break;
    }
  }

  // H_**: the normalized Gram of g_i = X_i^m - I(X_i^m) must have trivial
  // kernel.
  const int m = k + 1;
  std::vector<Polynomial> g;
  for (int i = 0; i < d; ++i) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(i)] = m;
    Polynomial mono = Polynomial::monomial(MultiIndex(e), 1.0);
    g.push_back(mono - apply_poly(mono));
  }
  bool ok = true;
  std::vector<double> norms(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    norms[static_cast<std::size_t>(i)] = std::sqrt(poly_integral_unit(g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)]));
    if (norms[static_cast<std::size_t>(i)] < 1e-14) ok = false;
  }
  if (ok) {
    std::vector<std::vector<double>> gram(static_cast<std::size_t>(d),
                                          std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            poly_integral_unit(g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)]) /
            (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
    ok = smallest_eigenvalue(gram) > 1e-8;
  }
  h.h_star_star = ok;

  std::lock_guard<std::mutex> lock(impl_->hyp_mutex);
  impl_->hyp_cache = h;
  return h;
}

double ProjectionOperator::operator_norm_estimate() const {
  const Impl& im = *impl_;
  if (im.variant == OperatorVariant::LagrangeTensor) {
    // Tensor operator norm = (1-D Lebesgue constant)^d; maximize the Lebesgue
    // function on a dense grid, then refine by ternary search in the
    // bracketing interval.
    const auto& nodes = im.node_values;
    auto lebesgue = [&nodes](double x) {
      double s = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        double l = 1.0;
        for (std::size_t v = 0; v < nodes.size(); ++v) {
          if (v == j) continue;
          l *= (x - nodes[v]) / (nodes[j] - nodes[v]);
        }
        s += std::abs(l);
      }
      return s;
    };
    const int n = 4097;
    double best = 0.0, bestx = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = -0.5 + static_cast<double>(i) / (n - 1);
      double v = lebesgue(x);
      if (v > best) {
        best = v;
        bestx = x;
      }
    }
    double a = std::max(-0.5, bestx - 1.0 / (n - 1));
    double b = std::min(0.5, bestx + 1.0 / (n - 1));
    for (int it = 0; it < 200; ++it) {
      double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (lebesgue(m1) < lebesgue(m2))
        a = m1;
      else
        b = m2;
    }
    best = std::max(best, lebesgue(0.5 * (a + b)));
    return std::pow(best, im.d);
  }
  // Sampled lower bound over smooth trigonometric functions; a projector
  // fixes its image, so the estimate is clamped below at 1.
  double best = 1.0;
  for (unsigned s = 0; s < 40; ++s) {
    RealFn f = smooth_sample(im.d, 777u + s);
    Polynomial pf = apply_fn(f);
    double nf = sup_diff_unit(f, [](const double*) { return 0.0; }, im.d, 33);
    double npf = grid_sup_unit(pf, 33);
    if (nf > 1e-12) best = std::max(best, npf / nf);
  }
  return best;
}

}  // namespace blockadapt

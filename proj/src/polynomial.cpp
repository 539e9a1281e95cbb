#include "blockadapt/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace blockadapt {

namespace {

long long binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long v = 1;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

}  // namespace

Polynomial::Polynomial(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.set(MultiIndex::zeros(dim), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& a, double c) {
  Polynomial p(a.dim());
  p.set(a, c);
  return p;
}

Polynomial Polynomial::variable(int dim, int axis) {
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(axis)] = 1;
  return monomial(MultiIndex(e), 1.0);
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [a, c] : terms_) d = std::max(d, a.order());
  return d;
}

int Polynomial::max_axis_degree() const {
  int d = -1;
  for (const auto& [a, c] : terms_) d = std::max(d, a.maxdeg());
  return d;
}

double Polynomial::coeff(const MultiIndex& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::set(const MultiIndex& a, double c) {
  if (a.dim() != dim_) throw std::invalid_argument("Polynomial::set: dimension mismatch");
  if (c == 0.0)
    terms_.erase(a);
  else
    terms_[a] = c;
}

void Polynomial::add(const MultiIndex& a, double c) { set(a, coeff(a) + c); }

double Polynomial::eval(const double* x) const {
  double s = 0.0;
  for (const auto& [a, c] : terms_) {
    double t = c;
    for (int i = 0; i < dim_; ++i) {
      double xi = x[i];
      for (int j = 0; j < a[i]; ++j) t *= xi;
    }
    s += t;
  }
  return s;
}

double Polynomial::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("Polynomial::eval: dimension mismatch");
  return eval(x.data());
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
  for (const auto& [a, c] : o.terms_) add(a, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
  for (const auto& [a, c] : o.terms_) add(a, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
  Polynomial r(dim_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      std::vector<int> e(static_cast<std::size_t>(dim_));
      for (int i = 0; i < dim_; ++i) e[static_cast<std::size_t>(i)] = a[i] + b[i];
      r.add(MultiIndex(e), ca * cb);
    }
  return r;
}

Polynomial Polynomial::compose_diag(const std::vector<double>& D) const {
  if (static_cast<int>(D.size()) != dim_)
    throw std::invalid_argument("compose_diag: scale dimension mismatch");
  for (double v : D)
    if (v < 0.0) throw std::invalid_argument("compose_diag: negative scale entry");
  Polynomial r(dim_);
  for (const auto& [a, c] : terms_) {
    double f = c;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < a[i]; ++j) f *= D[static_cast<std::size_t>(i)];
    r.add(a, f);
  }
  return r;
}

Polynomial Polynomial::compose_signs(const std::vector<int>& eps) const {
  if (static_cast<int>(eps.size()) != dim_)
    throw std::invalid_argument("compose_signs: sign dimension mismatch");
  for (int v : eps)
    if (v != 1 && v != -1)
      throw std::invalid_argument("compose_signs: entries must be -1 or +1");
  Polynomial r(dim_);
  for (const auto& [a, c] : terms_) {
    double f = c;
    for (int i = 0; i < dim_; ++i)
      if (a[i] % 2 == 1 && eps[static_cast<std::size_t>(i)] < 0) f = -f;
    r.add(a, f);
  }
  return r;
}

Polynomial Polynomial::compose_affine_diag(const std::vector<double>& scale,
                                           const std::vector<double>& shift) const {
  if (static_cast<int>(scale.size()) != dim_ || static_cast<int>(shift.size()) != dim_)
    throw std::invalid_argument("compose_affine_diag: dimension mismatch");
  Polynomial r(dim_);
  for (const auto& [a, c] : terms_) {
    // Expand c * prod_i (s_i X_i + t_i)^{a_i} binomially.
    Polynomial term = Polynomial::constant(dim_, c);
    for (int i = 0; i < dim_; ++i) {
      int n = a[i];
      if (n == 0) continue;
      Polynomial axis(dim_);
      const double s = scale[static_cast<std::size_t>(i)];
      const double t = shift[static_cast<std::size_t>(i)];
      for (int j = 0; j <= n; ++j) {
        double cj = static_cast<double>(binom(n, j)) * std::pow(s, j) * std::pow(t, n - j);
        if (cj == 0.0) continue;
        std::vector<int> e(static_cast<std::size_t>(dim_), 0);
        e[static_cast<std::size_t>(i)] = j;
        axis.add(MultiIndex(e), cj);
      }
      term = term * axis;
    }
    r += term;
  }
  return r;
}

Polynomial Polynomial::permute_vars(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != dim_)
    throw std::invalid_argument("permute_vars: dimension mismatch");
  Polynomial r(dim_);
  for (const auto& [a, c] : terms_) {
    std::vector<int> e(static_cast<std::size_t>(dim_), 0);
    for (int i = 0; i < dim_; ++i) e[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = a[i];
    r.add(MultiIndex(e), c);
  }
  return r;
}

Polynomial Polynomial::homogeneous_part(int m) const {
  Polynomial r(dim_);
  for (const auto& [a, c] : terms_)
    if (a.order() == m) r.set(a, c);
  return r;
}

double Polynomial::coeff_distance(const Polynomial& o) const {
  double d = 0.0;
  for (const auto& [a, c] : terms_) d = std::max(d, std::abs(c - o.coeff(a)));
  for (const auto& [a, c] : o.terms_) d = std::max(d, std::abs(c - coeff(a)));
  return d;
}

namespace {

void enumerate(const PolySpace& s, std::vector<int>& cur, int axis,
               std::vector<MultiIndex>& out) {
  if (axis == s.d) {
    MultiIndex a(cur);
    if (s.contains(a)) out.push_back(a);
    return;
  }
  int cap = s.k;  // per-axis exponent never exceeds k for any of the kinds
  if (s.kind == SpaceKind::PkStar) cap = s.k;  // maxdeg bound
  for (int e = 0; e <= cap; ++e) {
    cur[static_cast<std::size_t>(axis)] = e;
    enumerate(s, cur, axis + 1, out);
  }
  cur[static_cast<std::size_t>(axis)] = 0;
}

}  // namespace

bool PolySpace::contains(const MultiIndex& a) const {
  switch (kind) {
    case SpaceKind::Pk:
      return a.order() <= k;
    case SpaceKind::PkStar:
      return a.maxdeg() <= k && a.order() <= k + 1;
    case SpaceKind::PkStarStar:
      return a.maxdeg() <= k;
  }
  return false;
}

std::vector<MultiIndex> PolySpace::basis() const {
  if (k < 0) throw std::invalid_argument("PolySpace: k must be >= 0");
  if (d < 1) throw std::invalid_argument("PolySpace: d must be >= 1");
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  enumerate(*this, cur, 0, out);
  return out;  // odometer enumeration emits lexicographic order
}

long long PolySpace::dimension() const {
  switch (kind) {
    case SpaceKind::Pk:
      return binom(k + d, d);
    case SpaceKind::PkStar:
      return binom(k + d + 1, d) - d;
    case SpaceKind::PkStarStar: {
      long long v = 1;
      for (int i = 0; i < d; ++i) v *= (k + 1);
      return v;
    }
  }
  return 0;
}

std::vector<MultiIndex> space_basis(const PolySpace& s) { return s.basis(); }

Polynomial taylor_poly(const DerivOracle& deriv, const std::vector<double>& x, int m) {
  if (m < 1) throw std::invalid_argument("taylor_poly: order must be >= 1");
  const int d = static_cast<int>(x.size());
  Polynomial r(d);
  PolySpace all{SpaceKind::Pk, m, d};
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  std::vector<double> ones(x.size(), 1.0);
  for (const MultiIndex& a : all.basis()) {
    double da = deriv(a, x.data());
    if (da == 0.0) continue;
    // da * (X - x)^alpha / alpha!
    Polynomial t = Polynomial::monomial(a, da / a.factorial());
    r += t.compose_affine_diag(ones, neg);
  }
  return r;
}

}  // namespace blockadapt

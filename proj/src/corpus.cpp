#include "blockadapt/corpus.hpp"

#include <cmath>
#include <stdexcept>

namespace blockadapt {

double CorpusFunction::derivative(const MultiIndex& a, const double* x) const {
  if (a.dim() != dim)
    throw std::invalid_argument("CorpusFunction: derivative index dimension mismatch");
  if (a.order() > max_order)
    throw std::runtime_error("CorpusFunction '" + name + "': derivative oracle has no order-" +
                             std::to_string(a.order()) + " data");
  return deriv(a, x);
}

Polynomial CorpusFunction::taylor(const std::vector<double>& x, int m) const {
  if (m > max_order)
    throw std::runtime_error("CorpusFunction '" + name + "': derivative oracle has no order-" +
                             std::to_string(m) + " data");
  return taylor_poly(deriv, x, m);
}

HomogeneousPoly CorpusFunction::pi_at(const std::vector<double>& x, int m) const {
  return HomogeneousPoly(taylor(x, m).homogeneous_part(m), m);
}

namespace {

// Exact derivative of a polynomial corpus entry, taken symbolically.
DerivOracle poly_oracle(const Polynomial& p) {
  return [p](const MultiIndex& a, const double* x) {
    Polynomial d = p;
    for (int axis = 0; axis < a.dim(); ++axis)
      for (int rep = 0; rep < a[axis]; ++rep) {
        Polynomial next(d.dim());
        for (const auto& [idx, c] : d.terms()) {
          if (idx[axis] == 0) continue;
          std::vector<int> e = idx.entries();
          e[static_cast<std::size_t>(axis)] -= 1;
          next.add(MultiIndex(e), c * idx[axis]);
        }
        d = next;
      }
    return d.eval(x);
  };
}

Polynomial from_terms(int dim, std::vector<std::pair<std::vector<int>, double>> terms) {
  Polynomial p(dim);
  for (auto& [e, c] : terms) p.add(MultiIndex(e), c);
  return p;
}

// sin(pi x) sin(pi y): the alpha-derivative cycles through sin/cos with a
// pi^|alpha| factor.
double sinsin_deriv(const MultiIndex& a, const double* x) {
  auto branch = [](int order, double t) {
    switch (order % 4) {
      case 0: return std::sin(t);
      case 1: return std::cos(t);
      case 2: return -std::sin(t);
      default: return -std::cos(t);
    }
  };
  return std::pow(M_PI, a.order()) * branch(a[0], M_PI * x[0]) * branch(a[1], M_PI * x[1]);
}

std::vector<CorpusFunction> build_corpus() {
  std::vector<CorpusFunction> out;
  const Block unit01_1d({0.0}, {1.0});
  const Block unit01_2d({0.0, 0.0}, {1.0, 1.0});

  {
    Polynomial p = from_terms(1, {{{2}, 1.0}});
    out.push_back({"quad_1d", 1, unit01_1d,
                   [](const double* x) { return x[0] * x[0]; }, poly_oracle(p), 4, p});
  }
  {
    Polynomial p = from_terms(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}});
    out.push_back({"quad_iso", 2, unit01_2d,
                   [](const double* x) { return x[0] * x[0] + x[1] * x[1]; },
                   poly_oracle(p), 4, p});
  }
  {
    Polynomial p = from_terms(2, {{{2, 0}, 1.0}, {{0, 2}, 4.0}});
    out.push_back({"quad_aniso", 2, unit01_2d,
                   [](const double* x) { return x[0] * x[0] + 4.0 * x[1] * x[1]; },
                   poly_oracle(p), 4, p});
  }
  {
    Polynomial p = from_terms(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}});
    out.push_back({"saddle", 2, unit01_2d,
                   [](const double* x) { return x[0] * x[0] - x[1] * x[1]; },
                   poly_oracle(p), 4, p});
  }
  {
    Polynomial p = from_terms(2, {{{3, 0}, 1.0}, {{0, 3}, 1.0}});
    out.push_back({"cubic_odd", 2, unit01_2d,
                   [](const double* x) { return x[0] * x[0] * x[0] + x[1] * x[1] * x[1]; },
                   poly_oracle(p), 4, p});
  }
  out.push_back({"exp_aniso", 2, unit01_2d,
                 [](const double* x) { return std::exp(x[0] + 2.0 * x[1]); },
                 [](const MultiIndex& a, const double* x) {
                   return std::pow(2.0, a[1]) * std::exp(x[0] + 2.0 * x[1]);
                 },
                 4});
  out.push_back({"sine_product", 2, unit01_2d,
                 [](const double* x) { return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); },
                 sinsin_deriv, 4});
  return out;
}

}  // namespace

const std::vector<CorpusFunction>& corpus() {
  static const std::vector<CorpusFunction> c = build_corpus();
  return c;
}

const CorpusFunction& corpus_function(const std::string& name) {
  for (const CorpusFunction& f : corpus())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown corpus function '" + name + "'");
}

WeightFn weight_by_name(const std::string& name, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("weight scale must be positive");
  if (name == "unit")
    return {scale == 1.0 ? name : name + "*" + std::to_string(scale),
            [scale](const double*) { return scale; }};
  if (name == "one_plus_x2")
    return {scale == 1.0 ? name : name + "*" + std::to_string(scale),
            [scale](const double* x) { return scale * (1.0 + x[0] * x[0]); }};
  throw std::invalid_argument("unknown weight '" + name + "'");
}

std::vector<std::string> weight_names() { return {"unit", "one_plus_x2"}; }

}  // namespace blockadapt

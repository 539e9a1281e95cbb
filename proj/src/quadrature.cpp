#include "blockadapt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace blockadapt {

namespace {

Quadrature1D compute_gl(int q) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  Quadrature1D r;
  r.nodes.assign(static_cast<std::size_t>(q), 0.0);
  r.weights.assign(static_cast<std::size_t>(q), 0.0);
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton from the Chebyshev estimate of the i-th root of P_q.
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= q; ++n) {
        double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One more recurrence pass at the converged x for the weight.
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= q; ++n) {
      double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(q - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(q - 1 - i)] = w;
  }
  if (q % 2 == 1) r.nodes[static_cast<std::size_t>(q / 2)] = 0.0;
  return r;
}

}  // namespace

const Quadrature1D& gauss_legendre(int q) {
  static std::map<int, Quadrature1D> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_gl(q)).first;
  return it->second;
}

QuadratureRule::QuadratureRule(const Block& R, int q) {
  if (q < 1) throw std::invalid_argument("QuadratureRule: order must be >= 1");
  const Quadrature1D& gl = gauss_legendre(q);
  const int d = R.dim();
  axis_nodes_.resize(static_cast<std::size_t>(d));
  axis_weights_.resize(static_cast<std::size_t>(d));
  count_ = 1;
  for (int i = 0; i < d; ++i) {
    const double a = R.lo(i), b = R.hi(i);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto& nx = axis_nodes_[static_cast<std::size_t>(i)];
    auto& wx = axis_weights_[static_cast<std::size_t>(i)];
    nx.resize(static_cast<std::size_t>(q));
    wx.resize(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
      nx[static_cast<std::size_t>(j)] = mid + half * gl.nodes[static_cast<std::size_t>(j)];
      wx[static_cast<std::size_t>(j)] = half * gl.weights[static_cast<std::size_t>(j)];
    }
    count_ *= static_cast<std::size_t>(q);
  }
}

void QuadratureRule::point(std::size_t i, double* out) const {
  const int d = dim();
  std::size_t rest = i;
  for (int a = d - 1; a >= 0; --a) {
    const auto& nx = axis_nodes_[static_cast<std::size_t>(a)];
    out[a] = nx[rest % nx.size()];
    rest /= nx.size();
  }
}

double QuadratureRule::weight(std::size_t i) const {
  const int d = dim();
  std::size_t rest = i;
  double w = 1.0;
  for (int a = d - 1; a >= 0; --a) {
    const auto& wx = axis_weights_[static_cast<std::size_t>(a)];
    w *= wx[rest % wx.size()];
    rest /= wx.size();
  }
  return w;
}

}  // namespace blockadapt

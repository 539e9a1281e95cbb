#include "blockadapt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

namespace blockadapt {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  NelderMeadResult out;
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  std::vector<std::vector<double>> S(n + 1, x0);
  std::vector<double> F(n + 1);
  for (std::size_t i = 0; i < n; ++i) S[i + 1][i] += opt.initial_step;
  for (std::size_t i = 0; i <= n; ++i) F[i] = eval(S[i]);

  auto order = [&]() {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return F[a] < F[b]; });
    std::vector<std::vector<double>> S2(n + 1);
    std::vector<double> F2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      S2[i] = S[idx[i]];
      F2[i] = F[idx[i]];
    }
    S = std::move(S2);
    F = std::move(F2);
  };

  while (evals < opt.max_evals) {
    order();
    double spread = std::abs(F[n] - F[0]);
    if (spread <= opt.f_rel_tol * (std::abs(F[0]) + 1e-300)) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += S[i][j] / static_cast<double>(n);

    auto combine = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + coef * (S[n][j] - centroid[j]);
      return x;
    };

    std::vector<double> xr = combine(-1.0);
    double fr = eval(xr);
    if (fr < F[0]) {
      std::vector<double> xe = combine(-2.0);
      double fe = eval(xe);
      if (fe < fr) {
        S[n] = xe;
        F[n] = fe;
      } else {
        S[n] = xr;
        F[n] = fr;
      }
    } else if (fr < F[n - 1]) {
      S[n] = xr;
      F[n] = fr;
    } else {
      bool outside = fr < F[n];
      std::vector<double> xc = combine(outside ? -0.5 : 0.5);
      double fc = eval(xc);
      if (fc < std::min(fr, F[n])) {
        S[n] = xc;
        F[n] = fc;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) S[i][j] = S[0][j] + 0.5 * (S[i][j] - S[0][j]);
          F[i] = eval(S[i]);
        }
      }
    }
  }
  order();
  out.x = S[0];
  out.value = F[0];
  out.evals = evals;
  return out;
}

}  // namespace blockadapt

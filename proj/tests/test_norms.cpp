#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "blockadapt/adapt.hpp"
#include "blockadapt/norms.hpp"
#include "blockadapt/operator.hpp"
#include "blockadapt/parallel.hpp"
#include "oracles.hpp"

using namespace blockadapt;

TEST_CASE("quadrature exactness") {
  // weights positive, sum = |R|, monomials of per-axis degree <= 2q-1 exact
  Block R({-0.3, 0.2}, {1.1, 0.9});
  for (int q : {1, 2, 5, 10, 20}) {
    QuadratureRule rule(R, q);
    double wsum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(rule.weight(i) > 0.0);
      wsum += rule.weight(i);
    }
    CHECK(wsum == doctest::Approx(R.volume()).epsilon(1e-13));

    // exactness on x^a y^b up to a, b = 2q-1
    const int a = 2 * q - 1, b = std::min(3, 2 * q - 1);
    double num = 0.0;
    std::vector<double> x(2);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      rule.point(i, x.data());
      num += rule.weight(i) * std::pow(x[0], a) * std::pow(x[1], b);
    }
    auto mono_int = [](double lo, double hi, int e) {
      return (std::pow(hi, e + 1) - std::pow(lo, e + 1)) / (e + 1);
    };
    double exact = mono_int(R.lo(0), R.hi(0), a) * mono_int(R.lo(1), R.hi(1), b);
    CHECK(num == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("lp_norm basics") {
  Block unit = Block::unit_cube(2);
  RealFn one = [](const double*) { return 1.0; };
  for (double p : {1.0, 2.0, 3.5, kInfinity})
    CHECK(lp_norm(one, unit, p) == doctest::Approx(1.0).epsilon(1e-12));

  // oracle: max of |x^2 - 1/4| on I is 1/4 at x = 0
  Block I = Block::unit_cube(1);
  RealFn g = [](const double* x) { return x[0] * x[0] - 0.25; };
  const double oracle_max =
      oracles::max_abs_1d([](double x) { return x * x - 0.25; }, -0.5, 0.5);
  CHECK(oracle_max == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(lp_norm(g, I, kInfinity) == doctest::Approx(0.25));

  // oracle: integral of (x^2 - 1/4)^2 over I is 1/30
  const double oracle_int = oracles::integrate_1d(
      [](double x) { return std::pow(x * x - 0.25, 2.0); }, -0.5, 0.5);
  CHECK(oracle_int == doctest::Approx(1.0 / 30.0).epsilon(1e-10));
  CHECK(lp_norm(g, I, 2.0) == doctest::Approx(1.0 / std::sqrt(30.0)).epsilon(1e-12));

  CHECK_THROWS(lp_norm(g, I, 0.5));
  RealFn bad = [](const double* x) { return x[0] == 0.5 ? 1.0 / 0.0 : 0.0; };
  CHECK_THROWS(lp_norm(bad, I, kInfinity));
}

TEST_CASE("weighted norms") {
  Block I = Block::unit_cube(1);
  RealFn g = [](const double* x) { return x[0] * x[0] - 0.25; };
  WeightFn two{"two", [](const double*) { return 2.0; }};
  WeightFn one{"one", [](const double*) { return 1.0; }};
  for (double p : {1.0, 2.0, kInfinity}) {
    CHECK(lp_norm_weighted(g, I, p, two) ==
          doctest::Approx(2.0 * lp_norm(g, I, p)).epsilon(1e-14));
    CHECK(lp_norm_weighted(g, I, p, one) == doctest::Approx(lp_norm(g, I, p)));
  }

  // oracle: int_1^2 x dx = 3/2
  Block R12({1.0}, {2.0});
  RealFn unit_fn = [](const double*) { return 1.0; };
  WeightFn wx{"x", [](const double* x) { return x[0]; }};
  CHECK(lp_norm_weighted(unit_fn, R12, 1.0, wx) == doctest::Approx(1.5).epsilon(1e-13));

  WeightFn negative{"neg", [](const double* x) { return x[0] - 0.25; }};
  CHECK_THROWS(lp_norm_weighted(g, Block::unit_cube(1), 1.0, negative));
}

TEST_CASE("p-monotonicity on unit-volume blocks") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  Block unit = Block::unit_cube(2);
  for (int t = 0; t < 30; ++t) {
    double a = c(rng), b = c(rng), d = c(rng);
    RealFn g = [a, b, d](const double* x) {
      return a * x[0] * x[0] + b * x[0] * x[1] + d * x[1];
    };
    double n1 = lp_norm(g, unit, 1.0);
    double n2 = lp_norm(g, unit, 2.0);
    double ni = lp_norm(g, unit, kInfinity);
    CHECK(n1 <= n2 + 1e-10);
    CHECK(n2 <= ni + 1e-10);
  }
}

TEST_CASE("partition_error: exact uniform interpolation error of x^2") {
  // oracle: per-cell max is h^2/4 with h = 1/N, so error = 1/(4 N^2)
  ProjectionOperator op = ProjectionOperator::lagrange(1, 1, NodeKind::Equispaced);
  RealFn f = [](const double* x) { return x[0] * x[0]; };
  for (long long N : {10, 57, 100}) {
    BlockPartition P = uniform_partition(Block({0.0}, {1.0}), static_cast<int>(N));
    double err = partition_error(f, op, P, kInfinity);
    CHECK(err == doctest::Approx(1.0 / (4.0 * N * N)).epsilon(1e-12));
  }

  // reproduction: a function inside the reproduced space has zero error
  RealFn lin = [](const double* x) { return 3.0 * x[0] - 1.0; };
  BlockPartition P = uniform_partition(Block({0.0}, {1.0}), 13);
  CHECK(partition_error(lin, op, P, kInfinity) < 1e-10);
}

TEST_CASE("partition_error: bilinear on anisotropic quadratic") {
  // oracle: per-cell max of x'(h-x') + 4 y'(h-y') is h^2/4 + 4 h^2/4
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);
  RealFn f = [](const double* x) { return x[0] * x[0] + 4.0 * x[1] * x[1]; };
  for (int n : {4, 8, 16}) {
    BlockPartition P = uniform_partition(Block({0.0, 0.0}, {1.0, 1.0}), n);
    double err = partition_error(f, op, P, kInfinity);
    CHECK(err == doctest::Approx(1.25 / (n * n)).epsilon(1e-12));
  }
}

TEST_CASE("parallel kernel matches the serial reference bitwise") {
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);
  RealFn f = [](const double* x) { return std::exp(x[0] + 2.0 * x[1]); };
  BlockPartition P = uniform_partition(Block({0.0, 0.0}, {1.0, 1.0}), 12);
  for (double p : {1.0, 2.0, kInfinity}) {
    double serial = partition_error_ref(f, op, P, p);
    double parallel = partition_error(f, op, P, p);
    CHECK(serial == parallel);  // identical reduction order, identical bits
  }
}

TEST_CASE("local error bound diagnostic") {
  // error / (|R|^{1/tau} rho^{m/d} ||d^m g||) stays bounded under refinement
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);
  const int m = 2, d = 2;
  const double tau = 1.0;  // p = inf
  RealFn g = [](const double* x) { return std::exp(x[0] + 2.0 * x[1]); };
  // ||d^m g||: sup over unit directions of |pi_x(u)|, maximized over the block
  auto dm_norm = [](const Block& R) {
    double best = 0.0;
    for (int cx = 0; cx <= 8; ++cx)
      for (int cy = 0; cy <= 8; ++cy) {
        double x = R.lo(0) + R.width(0) * cx / 8.0;
        double y = R.lo(1) + R.width(1) * cy / 8.0;
        double e = std::exp(x + 2.0 * y);
        for (int a = 0; a < 256; ++a) {
          double th = 2.0 * M_PI * a / 256.0;
          double u = std::cos(th), v = std::sin(th);
          // pi_x(u,v) = e/2 u^2 + 2e uv + 2e v^2
          best = std::max(best, std::abs(e * (0.5 * u * u + 2.0 * u * v + 2.0 * v * v)));
        }
      }
    return best;
  };
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> u(0.0, 0.5), w(0.05, 0.5);
  double worst = 0.0;
  std::vector<double> worst_by_scale;
  for (double scale : {1.0, 0.5, 0.25}) {
    double worst_scale = 0.0;
    for (int t = 0; t < 30; ++t) {
      double lo1 = u(rng), lo2 = u(rng), w1 = w(rng) * scale, w2 = w(rng) * scale;
      Block R({lo1, lo2}, {lo1 + w1, lo2 + w2});
      RealFn interp = op.apply_on_block_fn(g, R);
      RealFn res = [&](const double* x) { return g(x) - interp(x); };
      double err = lp_norm(res, R, kInfinity);
      double bound = std::pow(R.volume(), 1.0 / tau) *
                     std::pow(R.rho(), static_cast<double>(m) / d) * dm_norm(R);
      worst_scale = std::max(worst_scale, err / bound);
    }
    worst_by_scale.push_back(worst_scale);
    worst = std::max(worst, worst_scale);
  }
  CHECK(worst < 10.0);  // a single modest constant
  // the ratio does not grow as blocks shrink
  CHECK(worst_by_scale[2] <= worst_by_scale[0] * 1.25 + 1e-9);
}

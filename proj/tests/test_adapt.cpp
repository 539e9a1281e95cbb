#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blockadapt/adapt.hpp"
#include "blockadapt/corpus.hpp"
#include "blockadapt/quadrature.hpp"

using namespace blockadapt;

namespace {

LocalBlockSpec const_spec(const std::vector<double>& widths) {
  Block shape = Block::centered(widths);
  return LocalBlockSpec{[shape](const double*) { return shape; },
                        Block({0.0, 0.0}, {1.0, 1.0})};
}

}  // namespace

TEST_CASE("uniform partitions") {
  BlockPartition p9 = uniform_partition(Block({0.0, 0.0}, {1.0, 1.0}), 3);
  CHECK(p9.size() == 9);
  for (std::size_t i = 0; i < 9; ++i)
    CHECK(p9.cell(i).width(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  BlockPartition whole = uniform_partition(Block({-1.0}, {2.0}), 1);
  CHECK(whole.size() == 1);
  CHECK(whole.cell(0).lo(0) == -1.0);

  BlockPartition p8 = uniform_partition(Block::unit_cube(3), 2);
  CHECK(p8.size() == 8);
  double vol = 0.0;
  for (std::size_t i = 0; i < 8; ++i) vol += p8.cell(i).volume();
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("counting: unit-cube specification tiles exactly") {
  LocalBlockSpec spec = const_spec({1.0, 1.0});
  for (int n : {2, 3, 4, 5, 8, 16}) {
    AdaptivePartition ap = build_adaptive(spec, n, TilePolicy::Clip);
    const long long n4 = static_cast<long long>(n) * n * n * n;
    CHECK(static_cast<long long>(ap.partition.size()) == n4);
    CHECK(static_cast<long long>(ap.part1.size()) == n4);
    CHECK(ap.part2.empty());
  }
}

TEST_CASE("counting: volume-1/4 specification") {
  LocalBlockSpec spec = const_spec({1.0, 0.25});
  AdaptivePartition ap = build_adaptive(spec, 16, TilePolicy::Clip);
  const double ratio = static_cast<double>(ap.partition.size()) / std::pow(16.0, 4);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.10));
  CHECK(static_cast<long long>(ap.partition.size()) == 4LL * 16 * 16 * 16 * 16);
}

TEST_CASE("validity of clipped constructions") {
  LocalBlockSpec spec = const_spec({std::sqrt(2.0), std::sqrt(2.0) / 2.0});
  for (int n : {2, 5}) {
    AdaptivePartition ap = build_adaptive(spec, n, TilePolicy::Clip);
    ap.partition.check_no_overlap();
    CHECK(ap.partition.size() == ap.part1.size() + ap.part2.size());
  }
}

TEST_CASE("part1 cells are translates near their barycenter") {
  const double s = std::sqrt(2.0);
  LocalBlockSpec spec = const_spec({s, s / 2.0});
  for (int n : {4, 9}) {
    AdaptivePartition ap = build_adaptive(spec, n, TilePolicy::Clip);
    const double wx = s / (static_cast<double>(n) * n);
    const double wy = 0.5 * s / (static_cast<double>(n) * n);
    const double bound = spec.domain.diam() / n + 1e-12;
    REQUIRE(!ap.part1.empty());
    for (std::size_t id : ap.part1) {
      const Block& c = ap.partition.cell(id);
      CHECK(std::abs(c.width(0) - wx) <= 1e-11 * wx);
      CHECK(std::abs(c.width(1) - wy) <= 1e-11 * wy);
      const auto& y = ap.q_centers[ap.owner[id]];
      for (double cx : {c.lo(0), c.hi(0)})
        for (double cy : {c.lo(1), c.hi(1)}) {
          double dist = std::hypot(cx - y[0], cy - y[1]);
          CHECK(dist <= bound);
        }
    }
  }
}

TEST_CASE("fragment statistic decreases and halves") {
  // side 40/39 leaves genuine fragments at every n in [4, 16]
  const double s = 40.0 / 39.0;
  LocalBlockSpec spec = const_spec({s, s});
  double prev = -1.0;
  double stat4 = 0.0, stat16 = 0.0;
  for (int n : {4, 5, 6, 7, 8, 12, 16}) {
    AdaptivePartition ap = build_adaptive(spec, n, TilePolicy::Clip);
    REQUIRE(!ap.part2.empty());
    const double stat = static_cast<double>(n) * n * ap.part2_max_diam;
    if (prev >= 0.0) CHECK(stat < prev);
    prev = stat;
    if (n == 4) stat4 = stat;
    if (n == 16) stat16 = stat;
  }
  CHECK(stat16 <= 0.5 * stat4);
}

TEST_CASE("fit policy tiles without fragments") {
  const double s = std::sqrt(2.0);
  LocalBlockSpec spec = const_spec({s, s / 2.0});
  for (int n : {4, 8, 15}) {
    AdaptivePartition ap = build_adaptive(spec, n, TilePolicy::Fit);
    CHECK(ap.part2.empty());
    CHECK(ap.max_stretch <= 0.5 / 2.0 + 1e-9);  // 1/(2c) with c >= 2 here
    ap.partition.check_no_overlap();
  }
}

TEST_CASE("cell count converges to the volume integral") {
  // smooth non-constant specification: #P_n / n^{2d} within 10 percent of
  // the integral of |R(x)|^{-1} at n in {8, 16}
  const CorpusFunction& f = corpus_function("exp_aniso");
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);
  LocalBlockSpec spec = spec_from_closed_form(f, op, kInfinity);

  QuadratureRule rule(f.domain, 20);
  std::vector<double> x(2);
  double integral = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.point(i, x.data());
    integral += rule.weight(i) / spec.shape(x.data()).volume();
  }
  for (int n : {8, 16}) {
    AdaptivePartition ap = build_adaptive(spec, n, TilePolicy::Fit);
    const double ratio =
        static_cast<double>(ap.partition.size()) / std::pow(static_cast<double>(n), 4);
    CHECK(ratio == doctest::Approx(integral).epsilon(0.10));
  }
}

TEST_CASE("partition_for_budget") {
  LocalBlockSpec spec = const_spec({1.0, 1.0});
  AdaptivePartition a = partition_for_budget(spec, 256, TilePolicy::Clip);
  CHECK(a.n == 4);
  CHECK(a.partition.size() == 256);

  AdaptivePartition b = partition_for_budget(spec, 255, TilePolicy::Clip);
  CHECK(b.n == 3);
  CHECK(b.partition.size() == 81);

  CHECK_THROWS(partition_for_budget(spec, 10, TilePolicy::Clip));

  // monotone in N
  AdaptivePartition c = partition_for_budget(spec, 4000, TilePolicy::Clip);
  CHECK(c.n >= a.n);
}

TEST_CASE("spec_from_km shapes") {
  const CorpusFunction& f = corpus_function("quad_aniso");
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);
  LocalBlockSpec spec = spec_from_km(f, op, kInfinity, 8.0);

  // pi_x is constant, so the specification is constant in x
  std::vector<double> x1{0.25, 0.25}, x2{0.75, 0.5};
  Block b1 = spec.shape(x1.data());
  Block b2 = spec.shape(x2.data());
  CHECK(b1.width(0) == doctest::Approx(b2.width(0)).epsilon(1e-12));

  // R_M^* has 2:1 aspect and unit volume; the prefactor is (K + 1/M)^{-tau/d}
  const double pref = std::pow(1.0 + 1.0 / 8.0, -0.5);
  CHECK(b1.width(0) == doctest::Approx(pref * std::sqrt(2.0)).epsilon(1e-3));
  CHECK(b1.width(1) == doctest::Approx(pref * std::sqrt(2.0) / 2.0).epsilon(1e-3));
  CHECK(b1.volume() == doctest::Approx(pref * pref).epsilon(1e-3));

  CHECK_THROWS(spec_from_km(f, op, kInfinity, 1.0));
}

TEST_CASE("spec_from_closed_form shapes and rejection") {
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);

  const CorpusFunction& aniso = corpus_function("quad_aniso");
  LocalBlockSpec spec = spec_from_closed_form(aniso, op, kInfinity);
  std::vector<double> x{0.3, 0.6};
  Block b = spec.shape(x.data());
  // K = 1 here, so R(x) = R^*(x) with widths (sqrt 2, sqrt 2 / 2)
  CHECK(b.width(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(b.width(1) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));

  const CorpusFunction& iso = corpus_function("quad_iso");
  LocalBlockSpec spec_iso = spec_from_closed_form(iso, op, kInfinity);
  Block bi = spec_iso.shape(x.data());
  // K = 1/2: square of side (1/2)^{-1/2} = sqrt 2
  CHECK(bi.width(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(bi.width(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // mixed signature still has K > 0 and a constant sign pattern
  const CorpusFunction& saddle = corpus_function("saddle");
  LocalBlockSpec spec_saddle = spec_from_closed_form(saddle, op, kInfinity);
  CHECK(spec_saddle.shape(x.data()).volume() > 0.0);

  // a pure-power coefficient vanishing on the domain is rejected
  const CorpusFunction& sine = corpus_function("sine_product");
  CHECK_THROWS_WITH_AS((void)spec_from_closed_form(sine, op, kInfinity),
                       doctest::Contains("spec_from_km"), std::runtime_error);
}

TEST_CASE("local block spec validation") {
  LocalBlockSpec spec = const_spec({2.0, 0.5});
  const double sup = spec.validate();
  CHECK(sup == doctest::Approx(std::sqrt(4.25)).epsilon(1e-12));
  CHECK(spec.recorded_sup_diam == sup);
}

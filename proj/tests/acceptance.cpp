// Acceptance suite: one check per shipped guarantee, each printing a
// pass/fail line. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blockadapt/adapt.hpp"
#include "blockadapt/cli.hpp"
#include "blockadapt/corpus.hpp"
#include "blockadapt/kfun.hpp"
#include "blockadapt/study.hpp"

using namespace blockadapt;

namespace {

int failures = 0;
std::vector<std::string> notes;

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

HomogeneousPoly hpoly(const std::vector<std::pair<std::vector<int>, double>>& terms,
                      int m) {
  Polynomial p(static_cast<int>(terms.front().first.size()));
  for (const auto& [e, c] : terms) p.add(MultiIndex(e), c);
  return HomogeneousPoly(std::move(p), m);
}

ProjectionOperator bilinear() {
  return ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);
}

// 1. Sharp constants in one dimension.
void criterion_1() {
  const double t0 = now_s();
  ProjectionOperator op = ProjectionOperator::lagrange(1, 1, NodeKind::Equispaced);
  auto x2 = hpoly({{{2}, 1.0}}, 2);
  const double k_inf = k_numeric(op, x2, kInfinity).value;
  const double k_2 = k_numeric(op, x2, 2.0).value;
  const double elapsed = now_s() - t0;
  const bool pass = std::abs(k_inf - 0.25) <= 1e-9 &&
                    std::abs(k_2 - 1.0 / std::sqrt(30.0)) <= 1e-6 && elapsed < 1.0;
  report(1, pass,
         "K(X^2): p=inf " + fmt(k_inf) + " (target 0.25), p=2 " + fmt(k_2) +
             " (target 0.182574), " + fmt(elapsed) + " s");
}

// 2. Sharp constants for the bilinear operator.
void criterion_2() {
  const double t0 = now_s();
  ProjectionOperator op = bilinear();
  bool pass = true;
  std::string detail;

  const double c0 = c_even(op, kInfinity, 0);
  const double c1 = c_even(op, kInfinity, 1);
  const double c2 = c_even(op, kInfinity, 2);
  pass = pass && std::abs(c0 - 0.5) <= 1e-9 && std::abs(c2 - 0.5) <= 1e-9 &&
         std::abs(c1 - 0.25) <= 1e-6;
  detail += "C(inf,0)=" + fmt(c0) + " C(inf,1)=" + fmt(c1) + " C(inf,2)=" + fmt(c2);

  // numeric optimizer against the direct-formula path
  auto pi_pos = hpoly({{{2, 0}, 1.0}, {{0, 2}, 1.0}}, 2);
  auto pi_neg = hpoly({{{2, 0}, -1.0}, {{0, 2}, -1.0}}, 2);
  for (double p : {1.0, 2.0, kInfinity}) {
    const double num_pos = k_numeric(op, pi_pos, p).value;
    const double num_neg = k_numeric(op, pi_neg, p).value;
    pass = pass && std::abs(num_pos - c_even(op, p, 2)) <= 1e-4 &&
           std::abs(num_neg - c_even(op, p, 0)) <= 1e-4;
  }

  // symmetry C(p, s) = C(p, d - s) across the exponents
  double worst_sym = 0.0;
  for (double p : {1.0, 2.0, kInfinity})
    for (int s = 0; s <= 2; ++s) {
      double diff = std::abs(c_even(op, p, s) - c_even(op, p, 2 - s));
      worst_sym = std::max(worst_sym, diff);
    }
  pass = pass && worst_sym <= 1e-6;
  const double elapsed = now_s() - t0;
  pass = pass && elapsed < 30.0;
  report(2, pass, detail + ", symmetry gap " + fmt(worst_sym) + ", " + fmt(elapsed) + " s");
}

// 3. Diagonal scaling law on random cases.
void criterion_3() {
  ProjectionOperator op = bilinear();
  std::mt19937 rng(987654);
  std::uniform_real_distribution<double> mag(0.2, 2.0), cross(-1.0, 1.0), dmag(0.5, 2.0);
  std::uniform_int_distribution<int> sign(0, 1);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    double l1 = mag(rng) * (sign(rng) ? 1.0 : -1.0);
    double l2 = mag(rng) * (sign(rng) ? 1.0 : -1.0);
    auto pi = hpoly({{{2, 0}, l1}, {{0, 2}, l2}, {{1, 1}, cross(rng)}}, 2);
    std::vector<double> D{dmag(rng), dmag(rng)};
    ScalingCheck c = verify_scaling(op, pi, kInfinity, D);
    worst = std::max(worst, c.rel_diff);
  }
  report(3, worst <= 1e-4, "50 random (pi, D): worst relative error " + fmt(worst));
}

// 4. p-monotonicity of the error function.
void criterion_4() {
  ProjectionOperator op = bilinear();
  std::mt19937 rng(13579);
  std::uniform_real_distribution<double> mag(0.2, 2.0), cross(-1.0, 1.0);
  std::uniform_int_distribution<int> sign(0, 1);
  bool pass = true;
  double worst_gap = 0.0;
  for (int t = 0; t < 50; ++t) {
    double l1 = mag(rng) * (sign(rng) ? 1.0 : -1.0);
    double l2 = mag(rng) * (sign(rng) ? 1.0 : -1.0);
    auto pi = hpoly({{{2, 0}, l1}, {{0, 2}, l2}, {{1, 1}, cross(rng)}}, 2);
    double k1 = k_numeric(op, pi, 1.0).value;
    double k2 = k_numeric(op, pi, 2.0).value;
    double ki = k_numeric(op, pi, kInfinity).value;
    pass = pass && k1 <= k2 + 1e-8 && k2 <= ki + 1e-8;
    worst_gap = std::max(worst_gap, std::max(k1 - k2, k2 - ki));
  }
  report(4, pass, "50 random pi, K_1 <= K_2 <= K_inf, worst violation " + fmt(worst_gap));
}

// 5. Hypothesis matrix.
void criterion_5() {
  bool pass = true;
  for (int k : {1, 2, 3})
    for (NodeKind nk : {NodeKind::Equispaced, NodeKind::Chebyshev}) {
      auto h = ProjectionOperator::lagrange(2, k, nk).check_hypotheses();
      pass = pass && h.h_pm && h.h_sigma && h.h_star && h.h_star_star;
    }
  auto hpk = ProjectionOperator::l2(2, 1, SpaceKind::Pk).check_hypotheses();
  pass = pass && hpk.h_pm && hpk.h_sigma && !hpk.h_star && hpk.h_star_star;
  auto hss = ProjectionOperator::l2(2, 1, SpaceKind::PkStarStar).check_hypotheses();
  pass = pass && hss.h_pm && hss.h_sigma && hss.h_star && hss.h_star_star;
  report(5, pass, "Lagrange equi/cheb k=1..3 all true; L2(Pk) misses H_*; L2(Pk**) all true");
}

// 6. Exact uniform study for f = x^2 on [0, 1].
void criterion_6() {
  const auto& f = corpus_function("quad_1d");
  ProjectionOperator op = ProjectionOperator::lagrange(1, 1, NodeKind::Equispaced);
  std::vector<long long> budgets;
  for (long long N = 10; N <= 1000; ++N) budgets.push_back(N);
  StudyResult res = run_study(f, op, kInfinity, budgets, PartitionKind::Uniform);
  double worst = 0.0;
  for (const auto& r : res.records) worst = std::max(worst, std::abs(r.scaled - 0.25));
  report(6, worst <= 1e-10,
         "N^2 error = 0.25 for N in 10..1000, worst deviation " + fmt(worst));
}

// 7. Lower-bound theorem at desk scale (uniform partitions).
void criterion_7() {
  const double t0 = now_s();
  const auto& f = corpus_function("quad_aniso");
  ProjectionOperator op = bilinear();
  StudyResult res =
      run_study(f, op, kInfinity, {256, 1024, 4096}, PartitionKind::Uniform);
  bool pass = true;
  double worst = 0.0;
  for (const auto& r : res.records) {
    worst = std::max(worst, std::abs(r.scaled - 1.25));
    pass = pass && r.scaled >= r.predicted - 1e-9;
    pass = pass && std::abs(r.predicted - 1.0) <= 1e-6;
  }
  pass = pass && worst <= 1e-6;
  const double elapsed = now_s() - t0;
  pass = pass && elapsed < 10.0;
  report(7, pass,
         "uniform scaled = 1.25 (worst dev " + fmt(worst) + ") >= predicted 1.0, " +
             fmt(elapsed) + " s");
}

// 8. Upper-bound theorems at desk scale (adaptive closed-form partitions).
void criterion_8() {
  const double t0 = now_s();
  const auto& f = corpus_function("quad_aniso");
  ProjectionOperator op = bilinear();
  StudyResult res = run_study(f, op, kInfinity, {100, 400, 1600, 6400, 25600, 64000},
                              PartitionKind::AdaptiveClosedForm);
  const auto& last = res.records.back();
  const double elapsed = now_s() - t0;
  bool pass = last.scaled >= 0.95 * last.predicted && last.scaled <= 1.15 * last.predicted;
  pass = pass && std::isfinite(res.admissibility);
  pass = pass && std::abs(res.slope + 1.0) <= 0.05;
  pass = pass && elapsed < 300.0;
  report(8, pass,
         "adaptive-cf: final ratio " + fmt(last.ratio) + " in [0.95, 1.15], slope " +
             fmt(res.slope) + ", admissibility " + fmt(res.admissibility) + ", " +
             fmt(elapsed) + " s");
}

// 9. Appendix counting and fragment statistics.
void criterion_9() {
  bool pass = true;
  std::string detail;

  Block dom({0.0, 0.0}, {1.0, 1.0});
  LocalBlockSpec cube{[](const double*) { return Block::unit_cube(2); }, dom};
  for (int n : {2, 3, 4, 5, 8, 16}) {
    AdaptivePartition ap = build_adaptive(cube, n, TilePolicy::Clip);
    const long long n4 = static_cast<long long>(n) * n * n * n;
    if (static_cast<long long>(ap.partition.size()) != n4 || !ap.part2.empty())
      pass = false;
  }
  detail += "#P_n = n^4 exactly;";

  Block quarter = Block::centered({1.0, 0.25});
  LocalBlockSpec qspec{[quarter](const double*) { return quarter; }, dom};
  AdaptivePartition q16 = build_adaptive(qspec, 16, TilePolicy::Clip);
  const double ratio = static_cast<double>(q16.partition.size()) / std::pow(16.0, 4);
  pass = pass && std::abs(ratio - 4.0) <= 0.4;
  detail += " quarter-volume ratio " + fmt(ratio) + ";";

  // fragment statistic: n^2 max part2 diameter halves from n = 4 to n = 16
  Block frag_shape = Block::centered({40.0 / 39.0, 40.0 / 39.0});
  LocalBlockSpec fspec{[frag_shape](const double*) { return frag_shape; }, dom};
  AdaptivePartition f4 = build_adaptive(fspec, 4, TilePolicy::Clip);
  AdaptivePartition f16 = build_adaptive(fspec, 16, TilePolicy::Clip);
  const double stat4 = 16.0 * f4.part2_max_diam;
  const double stat16 = 256.0 * f16.part2_max_diam;
  pass = pass && !f4.part2.empty() && !f16.part2.empty() && stat16 <= 0.5 * stat4;
  detail += " fragment stat " + fmt(stat4) + " -> " + fmt(stat16);
  report(9, pass, detail);
}

// 10. Weighted norms.
void criterion_10() {
  const auto& f = corpus_function("quad_aniso");
  ProjectionOperator op = bilinear();
  WeightFn w1 = weight_by_name("one_plus_x2");
  WeightFn w3 = weight_by_name("one_plus_x2", 3.0);
  bool pass = true;
  std::string detail;

  // constant rescaling leaves measured/predicted ratios invariant
  BlockPartition P = uniform_partition(f.domain, 16);
  const double e1 = partition_error(f.f, op, P, kInfinity, &w1);
  const double e3 = partition_error(f.f, op, P, kInfinity, &w3);
  const double p1 = predicted_constant(f, op, kInfinity, &w1);
  const double p3 = predicted_constant(f, op, kInfinity, &w3);
  const double drift = std::abs(e3 / p3 - e1 / p1);
  pass = pass && drift <= 1e-10;
  detail += "ratio drift under 3x weight: " + fmt(drift) + ";";

  // lower-bound analogue on uniform partitions
  StudyOptions wopt;
  wopt.weight = &w1;
  StudyResult uni =
      run_study(f, op, kInfinity, {256, 1024, 4096}, PartitionKind::Uniform, wopt);
  pass = pass && uni.records.back().scaled >= 0.95 * uni.records.back().predicted;

  // upper-bound analogue on weighted adaptive partitions
  StudyResult ada = run_study(f, op, kInfinity, {400, 1600, 6400, 25600, 64000},
                              PartitionKind::AdaptiveClosedForm, wopt);
  const auto& last = ada.records.back();
  pass = pass && last.scaled >= 0.95 * last.predicted &&
         last.scaled <= 1.15 * last.predicted;
  pass = pass && std::abs(ada.slope + 1.0) <= 0.05;
  detail += " weighted adaptive ratio " + fmt(last.ratio) + ", slope " + fmt(ada.slope);
  report(10, pass, detail);
}

// 11. Determinism of the CLI pipeline.
void criterion_11() {
  const std::string out1 = "acceptance_run_1.csv", out2 = "acceptance_run_2.csv";
  std::vector<std::string> args{
      "converge", "--fn", "quad_aniso", "--op", "lagrange:equispaced:k=1:d=2",
      "--p", "inf", "--kind", "adaptive-cf", "--budgets", "100,400,1600", "--out", out1};
  bool pass = dispatch(args) == 0;
  args.back() = out2;
  pass = pass && dispatch(args) == 0;
  auto read = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = read(out1), b = read(out2);
  pass = pass && !a.empty() && a == b;
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  report(11, pass, "repeated converge runs produce bit-identical CSV");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures;
}

// Compares the OpenMP kernels against their serial reference on the two hot
// paths: the per-cell partition-error map and the adaptive construction.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "blockadapt/adapt.hpp"
#include "blockadapt/corpus.hpp"
#include "blockadapt/norms.hpp"
#include "blockadapt/operator.hpp"
#include "blockadapt/parallel.hpp"
#include "blockadapt/study.hpp"

using namespace blockadapt;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_ms(F&& body) {
  double t0 = now_ms();
  body();
  return now_ms() - t0;
}

}  // namespace

int main() {
  const CorpusFunction& f = corpus_function("exp_aniso");
  ProjectionOperator op = ProjectionOperator::lagrange(2, 1, NodeKind::Equispaced);

  std::printf("%-34s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");

  {
    BlockPartition P = uniform_partition(f.domain, 96);
    double r_serial = 0.0, r_parallel = 0.0;
    double ts = time_ms([&] { r_serial = partition_error_ref(f.f, op, P, kInfinity); });
    double tp = time_ms([&] { r_parallel = partition_error(f.f, op, P, kInfinity); });
    std::printf("%-34s %12.1f %12.1f %8.2fx\n", "partition_error uniform 96x96", ts, tp,
                ts / tp);
    if (r_serial != r_parallel) {
      std::printf("MISMATCH: serial %.17g vs parallel %.17g\n", r_serial, r_parallel);
      return 1;
    }
  }

  {
    LocalBlockSpec spec = spec_from_closed_form(f, op, kInfinity);
    AdaptivePartition ap = build_adaptive(spec, 12, TilePolicy::Fit);
    double r_serial = 0.0, r_parallel = 0.0;
    double ts = time_ms([&] { r_serial = partition_error_ref(f.f, op, ap.partition, 2.0); });
    double tp = time_ms([&] { r_parallel = partition_error(f.f, op, ap.partition, 2.0); });
    std::printf("%-34s %12.1f %12.1f %8.2fx\n", "partition_error adaptive-cf p=2", ts, tp,
                ts / tp);
    if (r_serial != r_parallel) {
      std::printf("MISMATCH: serial %.17g vs parallel %.17g\n", r_serial, r_parallel);
      return 1;
    }
  }

  {
    LocalBlockSpec spec = spec_from_closed_form(f, op, kInfinity);
    int saved = max_threads();
    set_max_threads(1);
    double ts = time_ms([&] { (void)build_adaptive(spec, 24, TilePolicy::Fit); });
    set_max_threads(saved);
    double tp = time_ms([&] { (void)build_adaptive(spec, 24, TilePolicy::Fit); });
    std::printf("%-34s %12.1f %12.1f %8.2fx\n", "build_adaptive n=24", ts, tp, ts / tp);
  }

  return 0;
}

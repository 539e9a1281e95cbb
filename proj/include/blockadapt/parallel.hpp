#pragma once

#include <cstddef>

#ifdef BLOCKADAPT_HAVE_OPENMP
#include <omp.h>
#endif

namespace blockadapt {

/// Worker cap shared by every parallel map (set from the CLI --threads flag).
int max_threads();
void set_max_threads(int n);

/// Index-space parallel map. The body must write only to slot i of
/// preallocated outputs; all reductions run serially afterwards so results
/// do not depend on the thread count.
template <typename F>
void parallel_for(std::size_t count, F&& body) {
#ifdef BLOCKADAPT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(blockadapt::max_threads())
  for (long long i = 0; i < static_cast<long long>(count); ++i)
    body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace blockadapt

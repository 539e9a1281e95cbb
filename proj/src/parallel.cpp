#include "blockadapt/parallel.hpp"

#include <algorithm>

namespace blockadapt {

namespace {
int g_max_threads = 0;  // 0 = library default
}

int max_threads() {
  if (g_max_threads > 0) return g_max_threads;
#ifdef BLOCKADAPT_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_max_threads(int n) { g_max_threads = std::max(0, n); }

}  // namespace blockadapt

// Execution policy for grid sweeps.  Every sweep writes to per-node slots
// and performs reductions serially afterward, so the two policies produce
// bit-identical results; the parallel policy only shortens wall time.
#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ruled4 {

enum class Exec { serial, parallel };

// Runs fn(i) for i in [0, n).  fn must only write to state owned by its own
// index.
template <typename Fn>
void parallel_for(Exec exec, int n, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#else
  (void)exec;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace ruled4

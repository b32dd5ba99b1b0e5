#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specbound {

/// Number of worker threads the parallel kernels will use.
inline int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Sets the worker count for subsequent parallel regions. No-op without OpenMP.
inline void set_worker_count(int n) {
#ifdef _OPENMP
  if (n >= 1) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace specbound

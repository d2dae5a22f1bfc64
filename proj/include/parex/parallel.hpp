#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parex::par {

// Runtime switch between the OpenMP kernels and their serial reference
// loops. Every kernel is written so that both paths perform the identical
// sequence of floating-point operations per work item: results are bitwise
// equal, which the test suite asserts and the benchmark exploits.

inline std::atomic<bool>& detail_flag() {
  static std::atomic<bool> on{[] {
    const char* e = std::getenv("PAREX_SERIAL");
    return !(e != nullptr && e[0] == '1');
  }()};
  return on;
}

inline bool enabled() { return detail_flag().load(std::memory_order_relaxed); }
inline void set_enabled(bool on) { detail_flag().store(on, std::memory_order_relaxed); }

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class Body>
void for_index(std::int64_t n, Body&& body) {
#ifdef _OPENMP
  if (enabled() && n > 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    body(i);
  }
}

// Max-reduction over element(i), i = 0..n-1. max is exact in floating point,
// so the result does not depend on the reduction order.
template <class Element>
double max_reduce(std::int64_t n, Element&& element) {
  double m = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
  if (enabled() && n > 1) {
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::int64_t i = 0; i < n; ++i) {
      const double v = element(i);
      if (v > m) m = v;
    }
    return m;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = element(i);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace parex::par

#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cosmon {

// Thread count used by the OpenMP kernels. 0 = library default.
// Results are identical for any thread count: every parallel loop writes
// disjoint slots and reductions run serially in index order afterwards.
inline int& thread_count_ref() {
    static int n = 0;
    return n;
}

inline void set_threads(int n) {
    thread_count_ref() = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

inline int threads() { return thread_count_ref(); }

} // namespace cosmon

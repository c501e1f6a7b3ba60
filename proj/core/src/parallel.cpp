#include "capssc/parallel.hpp"

#ifdef CAPSSC_HAVE_OPENMP
#include <omp.h>
#endif

namespace capssc {

namespace {
int g_threads = 0;  // 0 = library default
}

void set_thread_count(int n) {
    g_threads = n;
#ifdef CAPSSC_HAVE_OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

int thread_count() {
#ifdef CAPSSC_HAVE_OPENMP
    return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

void parallel_for(long n, const void* ctx, void (*body)(long, const void*)) {
#ifdef CAPSSC_HAVE_OPENMP
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) body(i, ctx);
#else
    for (long i = 0; i < n; ++i) body(i, ctx);
#endif
}

}  // namespace detail
}  // namespace capssc

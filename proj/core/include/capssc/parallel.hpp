#pragma once

namespace capssc {

// Thread-count control for the deterministic parallel loops used across the
// library. All parallel regions use static scheduling with per-index output
// slots and serial reductions, so results are bit-identical for any thread
// count; this knob exists so reproducibility can be exercised explicitly.
void set_thread_count(int n);
int thread_count();

namespace detail {
// for(i in [0,n)) body(i), statically scheduled; body must only write to
// locations owned by index i.
void parallel_for(long n, const void* ctx, void (*body)(long, const void*));
}  // namespace detail

template <typename F>
void parallel_for(long n, F&& body) {
    detail::parallel_for(n, static_cast<const void*>(&body),
                         [](long i, const void* ctx) { (*static_cast<const F*>(ctx))(i); });
}

}  // namespace capssc

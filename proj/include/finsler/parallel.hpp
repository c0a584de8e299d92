#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace finsler::exec {

// Serial is the reference implementation; Parallel distributes the same
// per-index work over OpenMP threads. Every batch in the library writes
// per-index results into preallocated storage and reduces in index order
// afterwards, so both modes produce bit-identical output.
enum class Mode {
    Serial,
    Parallel,
};

int thread_cap();          // honors FINSLER_THREADS when set
void apply_thread_cap();   // installs the cap into the OpenMP runtime

template <class F>
void for_each_index(std::size_t n, Mode mode, F&& fn) {
#ifdef _OPENMP
    if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace finsler::exec

#include "finsler/parallel.hpp"

#include <cstdlib>
#include <string>

namespace finsler::exec {

int thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("FINSLER_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_cap() {
#ifdef _OPENMP
    omp_set_num_threads(thread_cap());
#endif
}

}  // namespace finsler::exec

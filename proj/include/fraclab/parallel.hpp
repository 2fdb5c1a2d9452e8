#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef FRACLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace fraclab {

enum class Execution { serial, parallel };

inline int worker_count() {
#ifdef FRACLAB_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Calls f(i) for i in [0, n). In parallel mode iterations run on the OpenMP
/// team with dynamic scheduling; the exception thrown by the lowest failing
/// index is rethrown after the loop, so failures do not depend on timing.
template <class F>
void for_each_index(std::size_t n, F&& f, Execution mode = Execution::parallel) {
    if (mode == Execution::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr first;
    std::size_t first_index = n;
    std::mutex guard;
#ifdef FRACLAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            f(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (i < first_index) {
                first_index = i;
                first = std::current_exception();
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace fraclab

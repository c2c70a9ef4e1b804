#pragma once

#include <cstddef>

namespace dsnsim {

/// How a data-parallel kernel is dispatched. `Serial` is the reference path
/// the tests compare the OpenMP path against; both must agree bit for bit.
enum class Exec { Serial, Parallel };

/// Runs `body(i)` for i in [0, n). Iterations must write disjoint outputs.
template <class Body>
void parallel_for(Exec exec, std::ptrdiff_t n, Body&& body) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    }
}

/// Same as parallel_for but with dynamic scheduling, for uneven per-item cost.
template <class Body>
void parallel_for_dynamic(Exec exec, std::ptrdiff_t n, Body&& body) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    }
}

/// Sets the OpenMP worker count; n <= 0 keeps the runtime default.
void set_thread_count(int n);
int thread_count();

}  // namespace dsnsim

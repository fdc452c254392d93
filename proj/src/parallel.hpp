// Exception-safe OpenMP loop: the first exception thrown by any iteration is
// rethrown on the calling thread after the loop finishes.
#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace helicity::detail {

template <class Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
    std::exception_ptr err;
    std::mutex m;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(m);
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace helicity::detail

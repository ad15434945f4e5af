#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace mdsample::detail {

// Runs body(i) for i in [0, n), in parallel when OpenMP is available. The
// first exception thrown by any iteration is rethrown on the calling thread.
template <class Body>
void parallelFor(std::size_t n, Body body)
{
    std::exception_ptr error;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace mdsample::detail

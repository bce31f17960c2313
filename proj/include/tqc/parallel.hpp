#pragma once

#include <cstddef>
#include <exception>

namespace tqc {

int max_threads();
void set_threads(int n);

// dynamic-schedule loop; the first exception thrown by any iteration is rethrown after the loop
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
        try {
            fn(static_cast<std::size_t>(k));
        } catch (...) {
#pragma omp critical(tqc_parallel_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace tqc

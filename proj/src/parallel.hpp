#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace covrel::detail {

// Calls fn(i) for every i in [begin, end), splitting the range into
// contiguous slices over at most `jobs` threads. If any call throws, the
// exception of the lowest failing index is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, unsigned jobs, Fn&& fn)
{
    const std::size_t n = end > begin ? end - begin : 0;
    const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * step;
        const std::size_t hi = std::min(end, lo + step);
        threads.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace covrel::detail

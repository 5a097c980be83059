#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace randhull::util {

/// Calls f(i) for i in [0, n), splitting the range into contiguous chunks over
/// `threads` workers (0 means hardware concurrency). f must only write to
/// per-index state; the first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace randhull::util

#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dispersal {

/// Runs fn(i) for i in [0, count) on up to `threads` workers, in contiguous
/// blocks. The first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, count);
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int begin = count * w / workers;
        const int end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (int i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace dispersal

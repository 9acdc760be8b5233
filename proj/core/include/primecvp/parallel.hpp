#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace primecvp {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Callers write
/// results into per-index slots, so output never depends on scheduling. The
/// first exception thrown by any task is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const std::size_t threads =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace primecvp

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace slln {

/// Worker count from SLLN_LAB_THREADS (falls back to hardware concurrency).
unsigned threads_from_env();

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers and returns
/// the results in index order, so any reduction over them is independent of
/// scheduling. The first exception thrown by a worker is rethrown.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::int64_t count, unsigned threads, Fn&& fn) {
    std::vector<Result> results(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    if (count <= 0) {
        return results;
    }
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::int64_t>(threads == 0 ? 1 : threads, 1, count));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) {
                return;
            }
            try {
                results[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(count);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return results;
}

}  // namespace slln

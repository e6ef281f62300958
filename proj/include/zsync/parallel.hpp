#pragma once

// Index-parallel loop over independent jobs. Results are written by index, so
// output order never depends on the worker count or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zsync {

inline std::size_t default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Calls f(i) for i in [0, count) on up to `jobs` threads (0 = all cores).
/// If any call throws, the exception of the lowest failing index is rethrown
/// after all workers finish.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& f) {
    if (jobs == 0) jobs = default_jobs();
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace zsync

#pragma once

// Deterministic index-space parallelism. Work items write to per-index slots,
// so the result is independent of the thread count. JULIA_RAYS_THREADS caps
// the number of workers (1 disables threading).

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace julia_rays {

inline unsigned parallel_thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("JULIA_RAYS_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) return std::min<unsigned>(hw * 4, static_cast<unsigned>(v));
        } catch (const std::exception&) {
            // ignore malformed values, fall back to hardware concurrency
        }
    }
    return hw;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned threads = std::min<std::size_t>(parallel_thread_count(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace julia_rays

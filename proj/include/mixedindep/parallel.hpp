#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mixedindep {

// Worker count: MIXEDINDEP_THREADS when set, hardware concurrency otherwise.
// Results never depend on this value, only wall time does.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("MIXEDINDEP_THREADS")) {
        try {
            const long requested = std::stol(env);
            if (requested >= 1) return static_cast<std::size_t>(requested);
        } catch (const std::exception&) {
            // ignore malformed values; fall back to hardware concurrency
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs f(i) for i in [0, n). Work item i must write only into slot i of any
// shared output, which keeps results independent of the schedule.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace mixedindep

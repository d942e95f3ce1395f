#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sgamma {

/// Worker count: SPECTRAL_GAMMA_THREADS if set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
inline unsigned worker_count() {
    if (const char* env = std::getenv("SPECTRAL_GAMMA_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(std::min(v, 256L));
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n). Results must be written to per-index slots so
/// the outcome does not depend on scheduling. The first exception (by index)
/// is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t n, F&& body, unsigned workers = 0) {
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex m;
    std::size_t err_index = n;
    std::exception_ptr err;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace sgamma

#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace heis {

// Default worker count: HEIS_THREADS if set, else 1.
inline int default_threads()
{
    if (const char* s = std::getenv("HEIS_THREADS")) {
        int n = std::atoi(s);
        if (n > 0)
            return n;
    }
    return 1;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to caller-owned slots indexed by i, so output order never depends
// on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn)
{
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!err)
                        err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

}  // namespace heis

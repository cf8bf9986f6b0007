#pragma once
#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hubbard {

// Worker count from HUBBARD_THREADS; 1 when unset or malformed.
inline unsigned thread_count() {
    const char* env = std::getenv("HUBBARD_THREADS");
    if (!env) return 1;
    try {
        int n = std::stoi(env);
        return n > 0 ? static_cast<unsigned>(n) : 1u;
    } catch (...) {
        return 1;
    }
}

// Runs body(i) for i in [0, n). Iterations must not share mutable state.
// The first exception thrown by any worker is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = thread_count()) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) body(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace hubbard

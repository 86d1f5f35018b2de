#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace hip {

/// Runs body(k) for k in [0, count) on up to `workers` threads. Each index runs
/// exactly once; if any throw, the exception of the lowest failing index is
/// rethrown after all threads join.
template <class Body>
void parallel_for(int count, int workers, Body&& body) {
    if (count <= 0) return;
    workers = std::clamp(workers, 1, count);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto run = [&] {
        for (int k = next++; k < count; k = next++) {
            try {
                body(k);
            } catch (...) {
                errors[static_cast<std::size_t>(k)] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace hip

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace navigator {

/// Runs job(i) for i in [0, jobs) on `workers` threads pulling from a shared
/// counter. The first exception thrown by a job is rethrown after all
/// threads finish; jobs that must not fail should catch their own errors.
inline void run_pool(std::size_t jobs, std::size_t workers, const std::function<void(std::size_t)>& job) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs, 1));
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr first_error;
    auto loop = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next >= jobs) return;
                i = next++;
            }
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        loop();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(loop);
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace navigator

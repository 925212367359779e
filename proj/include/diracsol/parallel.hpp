#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace diracsol {

/// Run body(i) for i in [0, n) on a few worker threads. Work is split into
/// contiguous chunks, so results written per index do not depend on timing.
/// The first exception thrown by any body is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t n, Body&& body)
{
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    workers             = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex lock;
    std::vector<std::thread> pool;
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            std::size_t begin = w * chunk;
            std::size_t end   = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> guard(lock);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace diracsol

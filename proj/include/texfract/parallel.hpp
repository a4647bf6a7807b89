#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace texfract {

/// Run fn(i) for i in [0, n) across hardware threads. Each index must write
/// only its own output slot; results are then deterministic regardless of
/// worker count.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
    if (n == 0) return;

    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > n) workers = static_cast<unsigned>(n);

    if (workers == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};

    auto body = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true))
                    first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(body);
    for (auto& th : pool)
        th.join();

    if (failed.load() && first_error)
        std::rethrow_exception(first_error);
}

} // namespace texfract

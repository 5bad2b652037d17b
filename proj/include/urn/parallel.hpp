#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace urn {

/// Runs fn(begin, end) on contiguous chunks of [0, count). Each index belongs
/// to exactly one chunk; callers write results by index so the outcome does not
/// depend on `threads`. threads == 0 means hardware concurrency.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(count, w * chunk);
            const std::size_t end = std::min(count, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace urn

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sgl {

/// Chunked index-parallel loop. fn(i) must be safe to run concurrently for
/// distinct i (writes go to preallocated per-index slots). threads <= 1 runs
/// inline.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += nw) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace sgl

#pragma once

// Deterministic chunked parallel loop.  Work is split into fixed-size chunks
// indexed 0..chunks-1; workers pull chunks from an atomic counter and write
// per-chunk results into a preallocated slot, so the merged result does not
// depend on the worker count or scheduling order.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace sympb {

inline unsigned effective_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// body(chunk_index, begin, end) processes items [begin, end).
inline void parallel_chunks(std::size_t total, std::size_t chunk_size, unsigned threads,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (total == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t chunks = (total + chunk_size - 1) / chunk_size;
    const unsigned nt = std::min<std::size_t>(effective_threads(threads), chunks);
    if (nt <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            body(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::vector<std::exception_ptr> errors(nt);
    for (unsigned w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
                    body(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace sympb

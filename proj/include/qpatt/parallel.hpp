// Minimal deterministic work splitting: static chunking over an index
// range, each index writing only its own output slot.
#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace qpatt {

// 0 means "use the hardware concurrency"
inline int resolve_thread_count(int requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
    const int workers = std::min(resolve_thread_count(threads), std::max(count, 1));
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(count) * w / workers);
        const int end = static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        pool.emplace_back([begin, end, &body] {
            for (int i = begin; i < end; ++i)
                body(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace qpatt

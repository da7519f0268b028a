#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace charsum {

// Deterministic work partitioning. The outer index range is cut into blocks
// of a fixed size that does not depend on the thread count; workers claim
// blocks from an atomic cursor. Exact accumulators merge componentwise (any
// order), float partials are kept per block and reduced in block order, so
// results are bit-identical for every thread count, T = 1 included.
inline constexpr std::uint64_t kOuterBlock = 16;

inline unsigned resolve_threads(unsigned requested) {
    return requested == 0 ? 1 : requested;
}

// body(block_index, begin, end, worker_id) over [0, count) in blocks.
template <class Body>
void for_each_block(std::uint64_t count, unsigned threads, Body&& body) {
    if (count == 0) return;
    const std::uint64_t blocks = (count + kOuterBlock - 1) / kOuterBlock;
    threads = resolve_threads(threads);
    if (threads > blocks) threads = static_cast<unsigned>(blocks);

    if (threads <= 1) {
        for (std::uint64_t blk = 0; blk < blocks; ++blk) {
            const std::uint64_t begin = blk * kOuterBlock;
            const std::uint64_t end = std::min(count, begin + kOuterBlock);
            body(blk, begin, end, 0u);
        }
        return;
    }

    std::atomic<std::uint64_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            while (true) {
                const std::uint64_t blk = cursor.fetch_add(1, std::memory_order_relaxed);
                if (blk >= blocks) break;
                const std::uint64_t begin = blk * kOuterBlock;
                const std::uint64_t end = std::min(count, begin + kOuterBlock);
                body(blk, begin, end, w);
            }
        });
    }
    for (auto& t : pool) t.join();
}

inline std::uint64_t block_count(std::uint64_t count) {
    return (count + kOuterBlock - 1) / kOuterBlock;
}

}  // namespace charsum

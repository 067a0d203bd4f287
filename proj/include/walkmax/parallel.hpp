#ifndef WALKMAX_PARALLEL_HPP
#define WALKMAX_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "walkmax/rng.hpp"

namespace walkmax {

struct ChunkRange {
    std::uint64_t index;
    std::uint64_t begin;
    std::uint64_t end; // half-open
};

// Splits `total` trials into at most `target_chunks` contiguous ranges.
// The split depends only on (total, target_chunks), never on the worker count.
inline std::vector<ChunkRange> make_chunks(std::uint64_t total,
                                           std::uint64_t target_chunks) {
    std::vector<ChunkRange> chunks;
    if (total == 0) return chunks;
    const std::uint64_t n = std::min(total, std::max<std::uint64_t>(1, target_chunks));
    const std::uint64_t q = total / n;
    const std::uint64_t r = total % n;
    std::uint64_t pos = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t len = q + (i < r ? 1 : 0);
        chunks.push_back({i, pos, pos + len});
        pos += len;
    }
    return chunks;
}

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WALKMAX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn once per trial with an independent substream seeded by
// (seed, trial index), partitioned into chunks for the worker pool. Trial
// streams are a pure function of the trial index, so results are independent
// of both worker count and chunk layout. Per-chunk outputs must be merged in
// chunk-index order.
inline void for_each_trial(const std::vector<ChunkRange>& chunks,
                           std::uint64_t seed, unsigned workers,
                           const std::function<void(const ChunkRange&,
                                                    std::uint64_t, Rng&)>& fn) {
    const unsigned nw = std::min<std::uint64_t>(resolve_workers(workers), chunks.size());
    const auto run_chunk = [&](const ChunkRange& c) {
        for (std::uint64_t t = c.begin; t < c.end; ++t) {
            Rng rng(seed, t);
            fn(c, t, rng);
        }
    };
    if (nw <= 1) {
        for (const auto& c : chunks) run_chunk(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= chunks.size()) return;
            run_chunk(chunks[i]);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Runs fn once per chunk with an independent substream seeded by
// (seed, chunk index). Chunks are claimed through an atomic counter, so any
// worker may execute any chunk; results must be written to per-chunk slots
// and merged afterwards in chunk-index order.
inline void for_each_chunk(const std::vector<ChunkRange>& chunks,
                           std::uint64_t seed, unsigned workers,
                           const std::function<void(const ChunkRange&, Rng&)>& fn) {
    const unsigned nw = std::min<std::uint64_t>(resolve_workers(workers), chunks.size());
    if (nw <= 1) {
        for (const auto& c : chunks) {
            Rng rng(seed, c.index);
            fn(c, rng);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= chunks.size()) return;
            Rng rng(seed, chunks[i].index);
            fn(chunks[i], rng);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Kahan accumulator for long running sums.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace walkmax

#endif

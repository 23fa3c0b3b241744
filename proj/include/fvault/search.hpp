#pragma once

// Candidate search machinery shared by the verifier and the attacker:
// stop rules, per-index subset sampling and a parallel first-hit driver.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "random.hpp"

namespace fvault {

enum class StopKind { threshold, crc };

// threshold: accept when at least D vault records lie on the candidate;
// crc: accept when the decoded secret passes its checksum.
struct StopRule {
    StopKind kind = StopKind::threshold;
    std::size_t threshold = 0;

    static StopRule by_threshold(std::size_t d) { return {StopKind::threshold, d}; }
    static StopRule by_crc() { return {StopKind::crc, 0}; }
};

// Uniform k-subset of [0, n) (Floyd's algorithm); the i-th draw of a
// search depends only on (seed, i).
inline void sample_subset(std::uint64_t seed, std::uint64_t index, std::size_t n, std::size_t k,
                          std::vector<std::size_t>& out) {
    SplitMix64 rng(derive_seed(seed, index));
    out.clear();
    for (std::size_t j = n - k; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        const std::size_t t = pick(rng);
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
        else
            out.push_back(j);
    }
}

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

// The index-th k-subset of [0, n) in lexicographic order.
inline void unrank_subset(std::uint64_t index, std::size_t n, std::size_t k, std::vector<std::size_t>& out) {
    out.clear();
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < k; ++slot) {
        for (std::size_t v = next; v < n; ++v) {
            const std::uint64_t rest = binomial_u64(n - v - 1, k - slot - 1);
            if (index < rest) {
                out.push_back(v);
                next = v + 1;
                break;
            }
            index -= rest;
        }
    }
    if (out.size() != k) throw PreconditionError("subset rank out of range");
}

struct SearchOutcome {
    static constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();

    std::uint64_t first_hit = none;
    std::uint64_t evaluated = 0;

    bool found() const { return first_hit != none; }
};

// Runs eval(index, worker) over indices 0..budget-1 and reports the
// smallest accepted index. Indices are issued in increasing order and every
// index below an accepted one is evaluated, so the hit is the same for any
// worker count; each worker stops after its own first acceptance.
template <class Eval>
SearchOutcome search_first(std::uint64_t budget, unsigned workers, Eval&& eval) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{SearchOutcome::none};
    std::atomic<std::uint64_t> evaluated{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&](unsigned worker) {
        try {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= budget || i > best.load(std::memory_order_acquire)) break;
                evaluated.fetch_add(1, std::memory_order_relaxed);
                if (eval(i, worker)) {
                    std::uint64_t current = best.load();
                    while (i < current && !best.compare_exchange_weak(current, i)) {
                    }
                    break;
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            best.store(0);
        }
    };

    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    if (failure) std::rethrow_exception(failure);
    return {best.load(), evaluated.load()};
}

}  // namespace fvault

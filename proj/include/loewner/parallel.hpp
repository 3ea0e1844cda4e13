#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace loewner {

// Global worker cap. 0 means "use hardware_concurrency". The CLI sets this
// from --threads / LOEWNER_LAB_THREADS; library callers may also pass an
// explicit count to parallel_for.
namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0};
    return cap;
}
} // namespace detail

inline int max_threads() {
    const int cap = detail::thread_cap().load();
    if (cap > 0) return cap;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void set_max_threads(int n) { detail::thread_cap().store(n); }

// Runs fn(i) for i in [0,n). Work is pulled from a shared counter, so the
// schedule is dynamic but results must be written to index i by the caller;
// reductions over the results stay deterministic.
namespace detail {
inline bool& inside_parallel_region() {
    thread_local bool inside = false;
    return inside;
}
} // namespace detail

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int threads = 0) {
    if (threads <= 0) threads = max_threads();
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    // nested calls run sequentially: the outer loop already owns the cores
    if (workers <= 1 || detail::inside_parallel_region()) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> counter{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        detail::inside_parallel_region() = true;
        for (;;) {
            const std::size_t i = counter.fetch_add(1);
            if (i >= n || failed.load(std::memory_order_relaxed)) break;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                break;
            }
        }
        detail::inside_parallel_region() = false;
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Pairwise (cascade) summation; deterministic and more accurate than a
// straight loop for long quadrature node lists.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += v[i];
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return v.empty() ? T{} : pairwise_sum(v, 0, v.size());
}

} // namespace loewner

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace repelcircle {

/// requested > 0 wins; else the REPELCIRCLE_THREADS environment
/// variable; else hardware concurrency.
inline int resolve_thread_count(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("REPELCIRCLE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(state, i) for i in [begin, end); every worker gets its own
/// state from make_state(). Indices are claimed from a shared counter,
/// so fn must write only to index-owned slots; merged results are then
/// independent of scheduling and thread count.
template <typename MakeState, typename Fn>
void parallel_for_stateful(int begin, int end, int threads, MakeState make_state, Fn fn) {
    const int span = end - begin;
    if (span <= 0) {
        return;
    }
    threads = resolve_thread_count(threads);
    if (threads > span) {
        threads = span;
    }
    if (threads <= 1) {
        auto state = make_state();
        for (int i = begin; i < end; ++i) {
            fn(state, i);
        }
        return;
    }
    std::atomic<int> next{begin};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            try {
                auto state = make_state();
                while (true) {
                    const int i = next.fetch_add(1);
                    if (i >= end) {
                        break;
                    }
                    fn(state, i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

template <typename Fn>
void parallel_for(int begin, int end, int threads, Fn fn) {
    struct NoState {};
    parallel_for_stateful(
        begin, end, threads, [] { return NoState{}; },
        [&fn](NoState&, int i) { fn(i); });
}

}  // namespace repelcircle

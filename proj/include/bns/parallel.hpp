#ifndef BNS_PARALLEL_HPP
#define BNS_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bns {

// Static block partition of [0, n) over n_threads. The body must only touch
// state owned by its own index so results are identical for any thread count;
// reductions are done serially by the caller afterwards.
inline void parallel_for(std::size_t n, int n_threads,
                         const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    if (n_threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t workers = static_cast<std::size_t>(n_threads);
    if (workers > n) workers = n;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = n / workers;
    std::size_t rem = n % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t end = begin + chunk + (w < rem ? 1 : 0);
        pool.emplace_back([begin, end, &body] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

inline int default_thread_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace bns

#endif

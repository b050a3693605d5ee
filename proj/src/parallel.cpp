#include "turbda/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace turbda {

int default_worker_count() {
    if (const char* env = std::getenv("TURBDA_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (workers < 1) workers = 1;
    const std::size_t nw = std::min<std::size_t>(workers, n);
    if (nw == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    // block b gets [b*q + min(b,r), ...) with q = n/nw, r = n%nw
    const std::size_t q = n / nw, r = n % nw;
    std::vector<std::exception_ptr> errs(nw);
    std::vector<std::size_t> err_index(nw, n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t b = 0; b < nw; ++b) {
        const std::size_t lo = b * q + std::min(b, r);
        const std::size_t hi = lo + q + (b < r ? 1 : 0);
        pool.emplace_back([&, b, lo, hi]() {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    if (!errs[b]) {
                        errs[b] = std::current_exception();
                        err_index[b] = i;
                    }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    // rethrow the failure with the smallest task index for determinism
    std::size_t best = n;
    std::exception_ptr first;
    for (std::size_t b = 0; b < nw; ++b) {
        if (errs[b] && err_index[b] < best) {
            best = err_index[b];
            first = errs[b];
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace turbda

#include "varops/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace varops::detail {

unsigned thread_budget()
{
    static const unsigned budget = [] {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("VAROPS_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1)
                hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
            else
                hw = 1;
        }
        return hw;
    }();
    return budget;
}

namespace {
thread_local bool in_worker = false;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body)
{
    if (count == 0)
        return;
    const unsigned budget = thread_budget();
    if (budget <= 1 || in_worker || count < 2) {
        body(0, count);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(budget, count);
    const std::size_t chunk = (count + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&body, begin, end] {
            in_worker = true;
            body(begin, end);
            in_worker = false;
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace varops::detail

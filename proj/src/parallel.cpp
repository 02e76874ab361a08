#include "pmheat/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pmheat {

int thread_budget() {
    static const int budget = [] {
        if (const char* env = std::getenv("PMHEAT_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) {
                return v;
            }
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<int>(std::clamp(hw, 1u, 8u));
    }();
    return budget;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int budget = thread_budget();
    if (budget <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    const std::size_t workers = std::min<std::size_t>(budget, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

} // namespace pmheat

#include "germflow/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace germflow {

int max_threads() {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("GERMFLOW_THREADS")) {
        const int requested = std::atoi(env);
        if (requested >= 1 && requested < cap) cap = requested;
    }
    return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace germflow

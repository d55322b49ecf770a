#include "ballop/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ballop {

int worker_threads() {
    static const int cached = [] {
        const char* env = std::getenv("BALLOP_THREADS");
        if (env == nullptr) return 1;
        int requested = std::atoi(env);
        if (requested < 1) return 1;
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        return requested < hw ? requested : hw;
    }();
    return cached;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    int threads = worker_threads();
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ballop

#include "symmarkov/util.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace symmarkov::util {

int thread_cap() {
    const char* env = std::getenv("SYMMARKOV_THREADS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end == env || parsed < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(std::min<long>(parsed, hw));
}

void parallel_blocks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (threads <= 1 || n < 1024) {
        fn(0, n);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace symmarkov::util

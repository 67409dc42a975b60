#include "ect/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ect {
namespace {

std::atomic<unsigned> g_threads{0};

unsigned env_threads() {
    const char* env = std::getenv("ECT_THREADS");
    if (env == nullptr) return 0;
    try {
        const long value = std::stol(env);
        return value > 0 ? static_cast<unsigned>(value) : 0;
    } catch (...) {
        return 0;
    }
}

}  // namespace

unsigned default_threads() {
    if (const unsigned set = g_threads.load(); set != 0) return set;
    if (const unsigned env = env_threads(); env != 0) return env;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(unsigned threads) { g_threads.store(threads); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads) {
    if (threads == 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace ect

#include "islm/threads.hpp"

#include <cstdlib>
#include <thread>

namespace islm {

std::size_t worker_count() {
    static const std::size_t n = [] {
        if (const char* env = std::getenv("ISLM_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<std::size_t>(v);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<std::size_t>(hw ? hw : 1);
    }();
    return n;
}

} // namespace islm

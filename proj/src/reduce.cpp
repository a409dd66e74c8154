#include "curvn/reduce.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace curvn {

namespace {

double pairwise_block(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_block(v, half) + pairwise_block(v + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_block(values.data(), values.size());
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("CURVN_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) hw = std::min(hw, static_cast<int>(cap));
    }
    return hw;
}

namespace {
thread_local bool inside_worker = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    // Nested calls run serially in their worker; only the outermost level
    // fans out.
    if (workers <= 1 || n < 2 || inside_worker) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;

    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, begin, end] {
            inside_worker = true;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace curvn

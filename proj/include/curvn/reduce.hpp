#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace curvn {

// Pairwise (tree) summation with a fixed reduction order. Every quadrature
// in this library accumulates through this function so that results do not
// depend on how work was split across threads.
double pairwise_sum(std::span<const double> values);

// Number of worker threads: hardware concurrency, capped by the
// CURVN_THREADS environment variable when set (minimum 1).
int worker_count();

// Runs fn(i) for i in [0, n). Work is split across worker_count() threads
// in contiguous chunks; fn must only write to per-index state. Exceptions
// from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace curvn

#pragma once

#include <cstddef>
#include <functional>

namespace bvs {

// Worker count: BVS_THREADS environment variable caps parallelism
// (0 or unset means hardware concurrency).
int worker_count();

// Runs fn(i) for i in [0, count). Results must be written to
// index-addressed storage so the outcome is identical for any worker
// count, including 1. Nested calls run sequentially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace bvs

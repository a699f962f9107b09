#pragma once

#include <cstddef>
#include <functional>

namespace txh {

/// Worker count: TXH_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
unsigned thread_count();

/// Runs fn(i) for i in [0, n) across thread_count() workers. Each index is
/// visited exactly once; the first exception thrown by any worker is
/// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace txh

#pragma once

#include <cstddef>
#include <functional>

namespace surfnema {

/// Worker cap from SURFNEMA_THREADS (0 or unset: hardware concurrency).
int max_threads();

/// Runs fn(begin, end) over a partition of [0, n). Chunks are disjoint, so
/// node-parallel loops need no synchronization; single-threaded when the
/// cap is 1 or the range is small.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace surfnema

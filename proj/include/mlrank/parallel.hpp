#pragma once

#include <cstddef>
#include <functional>

namespace mlrank {

// Thread count resolution order: explicit request > MLRANK_THREADS > hardware.
// Always returns at least 1.
int resolve_threads(int requested = 0);

// Runs fn(i) for i in [0, count) across at most `threads` workers with static
// contiguous chunking. Each index is visited exactly once, so writers that
// target slot i only are race-free and the result is independent of the
// thread count. Exceptions from workers are rethrown on the caller thread.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace mlrank

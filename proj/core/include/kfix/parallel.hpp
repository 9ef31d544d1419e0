#pragma once

#include <cstddef>
#include <functional>

namespace kfix {

// Number of worker threads used by parallel_for. Defaults to the hardware
// concurrency; the KFIX_THREADS environment variable overrides it (clamped
// to >= 1). Read once per process.
int worker_count();

// Runs fn(i) for i in [0, n), split in contiguous chunks over the workers.
// Output cells must be disjoint per index; results are then independent of
// the thread count, which keeps runs reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kfix

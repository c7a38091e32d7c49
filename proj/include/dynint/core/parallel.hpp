#pragma once

#include <cstddef>
#include <functional>

namespace dynint {

// Worker count: DYNINT_THREADS when set, hardware concurrency otherwise.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on the worker pool. Results must be
// written to per-index slots; the first exception by index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dynint

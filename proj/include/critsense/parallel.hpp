#pragma once

#include <cstddef>
#include <functional>

namespace critsense {

// Worker count: hardware concurrency capped by CRITSENSE_THREADS, unless forced.
int worker_count();

// Forces an exact worker count, oversubscribing if needed; 0 restores the default.
void set_worker_count(int count);

// Runs body(i) for i in [0, n). Each index runs exactly once; callers write results
// into preallocated slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace critsense

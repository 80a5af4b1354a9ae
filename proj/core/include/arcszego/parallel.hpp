#pragma once

#include <cstddef>
#include <functional>

namespace arcszego {

// Worker count: ARC_SZEGO_THREADS if set and positive, else the hardware
// concurrency (at least 1).
int worker_count();

// Runs body(i) for i in [0, n). Iterations must write disjoint outputs.
// Work is split into contiguous blocks, one per worker; exceptions thrown by
// any block are rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace arcszego

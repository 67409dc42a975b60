#pragma once

#include <cstddef>
#include <functional>

namespace ect {

// Process-wide worker count used when a call passes threads == 0.
// Resolution order: set_default_threads(), ECT_THREADS, hardware concurrency.
unsigned default_threads();
void set_default_threads(unsigned threads);

// Runs body(i) for i in [0, count). Each index is visited exactly once; the
// caller writes results into per-index slots so any reduction stays ordered.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace ect

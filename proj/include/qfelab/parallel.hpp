#pragma once

#include <cstddef>
#include <functional>

namespace qfelab {

// Process-wide worker cap. 0 means "use hardware concurrency".
void set_max_threads(unsigned threads);
unsigned max_threads();

// Calls body(i) for every i in [0, count). Each index is visited exactly once;
// callers write results into per-index slots so the outcome never depends on
// the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qfelab

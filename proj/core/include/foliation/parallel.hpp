#pragma once

#include <cstddef>
#include <functional>

namespace fol {

// Worker count: FOLIATION_THREADS if set and positive, else the hardware
// concurrency (at least 1).  A process-wide override takes precedence.
unsigned worker_count();
void set_worker_count(unsigned n);  // 0 restores the default

// Runs body(i) for i in [0, n).  Each index is visited exactly once; results
// must be written to index-owned slots so the outcome is independent of the
// schedule.  The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fol

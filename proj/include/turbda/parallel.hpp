#pragma once

#include <cstddef>
#include <functional>

namespace turbda {

// Worker count from TURBDA_WORKERS, falling back to the logical core count.
int default_worker_count();

// Runs fn(i) for i in [0, n) across `workers` threads using a static
// block partition.  Tasks must write to disjoint state.  The partition is a
// pure function of (n, workers), and results are identical no matter how
// blocks are scheduled, so outputs do not depend on the worker count as long
// as fn itself is deterministic per index.  The first exception (by task
// index) is rethrown on the caller thread.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace turbda

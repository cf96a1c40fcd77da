#pragma once

#include <cstddef>
#include <functional>

namespace mouldkit {

/* Worker count for data-parallel table builds: hardware concurrency, capped
   by the MOULDKIT_THREADS environment variable when set. */
int worker_count(std::size_t jobs);

/* Runs fn(i) for i in [0, n) across workers. Callers write results into
   preallocated per-index slots, so output order never depends on the
   thread count. Exceptions are rethrown on the calling thread. */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mouldkit

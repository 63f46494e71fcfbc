#pragma once

#include <cstddef>
#include <functional>

namespace gelfand {

// Worker count: GELFAND_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int thread_count();

// Calls fn(i) for i in [0, n) across thread_count() workers. Work is split
// by index so results written to per-index slots are deterministic. The
// first exception (by index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gelfand

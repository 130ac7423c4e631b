#pragma once

#include <cstddef>
#include <functional>

namespace foliage {

// Worker count: FOLIAGE_THREADS when set to a positive integer, else the
// hardware concurrency (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. Work is
// handed out by index, so results written to slot i are deterministic. The
// first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace foliage

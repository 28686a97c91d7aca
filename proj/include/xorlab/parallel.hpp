#pragma once

#include <cstddef>
#include <functional>

namespace xorlab {

// Worker count: XORLAB_THREADS if set and positive, else the hardware count.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. Each index
// runs exactly once; callers write results into per-index slots so the merged
// output does not depend on scheduling. The first exception thrown by any
// task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace xorlab

#pragma once

#include <cstddef>
#include <functional>

namespace rsdeig {

// Worker count: EIG_THREADS if set and positive, otherwise hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count). Iterations must write to disjoint outputs;
// callers reduce afterwards in index order so results do not depend on scheduling.
// The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rsdeig

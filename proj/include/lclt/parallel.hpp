#pragma once

#include <cstddef>
#include <functional>

namespace lclt {

/// Worker count: hardware concurrency, capped by LCLT_LAB_THREADS when set.
unsigned worker_count();

/// Runs task(i) for i in [0, n) on up to worker_count() threads. Tasks must
/// write only to their own slot; callers reduce the slots in index order so
/// results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace lclt

#pragma once

#include <cstddef>
#include <functional>

namespace isolp {

/// Worker count: ISOLP_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Calls body(i) for i in [0, count), split into contiguous blocks across
/// threads. Each index is visited exactly once; callers write results into
/// per-index slots so the outcome does not depend on scheduling. The first
/// exception thrown by any block is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace isolp

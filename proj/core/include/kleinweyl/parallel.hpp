#pragma once

#include <cstddef>
#include <functional>

namespace kleinweyl {

/// Worker cap: KLEINWEYL_THREADS if set and positive, otherwise the hardware
/// concurrency (at least 1).
int thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads using
/// contiguous blocks. Each index must write only its own output slot, which
/// keeps results independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace kleinweyl

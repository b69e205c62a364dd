#pragma once

#include <cstddef>
#include <functional>

namespace prodridge {

/// Thread count used when a caller passes 0: $PRODRIDGE_THREADS if set,
/// otherwise the hardware concurrency.
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers with static
/// contiguous chunks. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace prodridge

#pragma once

#include <cstddef>
#include <functional>

namespace gcnet {

/// Worker count used when a caller passes 0: GCNET_THREADS if set, otherwise
/// the hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs body(k) for k in [0, count) on up to `threads` workers (0 = default).
/// Tasks are claimed dynamically; bodies must write to disjoint outputs.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gcnet

#pragma once

#include <cstddef>
#include <functional>

namespace gaussmatch::harness {

/// Runs task(i) for i in [0, count) on `threads` workers pulling indices from
/// a shared counter. Tasks must write only to their own output slot. The
/// first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

}  // namespace gaussmatch::harness

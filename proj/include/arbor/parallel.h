#pragma once

#include <cstddef>
#include <functional>

namespace arbor {

/// Runs `body(i)` for i in [0, count) on a small thread pool (0 threads means
/// hardware concurrency). The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace arbor

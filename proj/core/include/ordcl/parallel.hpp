#pragma once

#include <cstddef>
#include <functional>

namespace ordcl {

/// `requested` if positive, else ORDCL_THREADS if set and positive, else the
/// hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Calls body(i) for i in [0, count) on up to `threads` worker threads.
/// Items are handed out in index order; the first exception thrown by any
/// body is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ordcl

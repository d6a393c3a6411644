#pragma once

#include <functional>

namespace sfwg {

/// Worker cap: SFWG_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. The first
/// exception thrown by any body is rethrown on the calling thread.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace sfwg

#pragma once

#include <cstddef>
#include <functional>

namespace wmt {

/// Worker cap: WMT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Work is
/// handed out by index and callers write results into index-addressed
/// slots, so the outcome does not depend on scheduling. The exception
/// from the lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wmt

#pragma once

#include <cstddef>
#include <functional>

namespace gsp {

/// Worker count: GSP_THREADS when set to a positive integer, otherwise the
/// hardware concurrency. Throws invalid_argument for malformed values.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on worker_count() threads. If any call
/// throws, the exception from the lowest failing index is rethrown after
/// all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gsp

#pragma once

#include <cstddef>
#include <functional>

namespace hilb {

/// Worker count: HILB_THREADS when set to a positive integer, else the hardware count.
unsigned worker_count();

/// Calls f(i) for i in [0, n) on up to worker_count() threads. f must only
/// write to per-index state. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace hilb

#pragma once

#include <cstddef>
#include <functional>

namespace mplex {

// Worker count from MPLEX_WORKERS, defaulting to the hardware concurrency.
// Never affects numerical results: all parallel loops write into per-index
// slots and reduce in index order.
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to `workers` threads (0 = worker_count()).
// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

}  // namespace mplex

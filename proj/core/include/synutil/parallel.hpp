#pragma once

#include <cstddef>
#include <functional>

namespace synutil {

// Number of worker threads used for data-parallel loops: the SYNUTIL_THREADS
// environment variable if set (minimum 1), otherwise the hardware count.
int max_threads();

// Runs body(i) for i in [0, n). Jobs must be independent; each writes only
// into its own output slot, so the result is identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace synutil

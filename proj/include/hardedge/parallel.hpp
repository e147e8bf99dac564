#pragma once

#include <cstddef>
#include <functional>

namespace hardedge::parallel {

/// Worker count: explicit value if positive, else HARDEDGE_THREADS, else hardware concurrency.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on a static partition. Results must be written to
/// per-index slots so the outcome does not depend on the thread count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace hardedge::parallel

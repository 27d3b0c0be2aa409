#pragma once

#include <cstddef>
#include <functional>

namespace edgelbp {

/// Runs body(i) for i in [0, n) on up to `threads` workers (<= 1 runs
/// inline). Indices are handed out dynamically; callers write results by
/// index so the outcome does not depend on scheduling. The first exception
/// thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace edgelbp

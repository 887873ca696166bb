#pragma once

#include <cstddef>
#include <functional>

namespace eventwarp {

/// Runs fn(index) for index in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). Work items must be independent; callers that
/// need determinism reduce the results afterwards in a fixed order.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace eventwarp

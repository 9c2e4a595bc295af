#pragma once

#include <cstddef>
#include <functional>

namespace cges {

/// Runs fn(i) for i in [0, count) across up to `threads` workers. Each index
/// must write only its own output slot; with threads <= 1 the loop runs
/// inline. Results are identical to the serial order regardless of thread
/// count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

/// Number of hardware threads, at least 1.
unsigned hardware_threads();

}  // namespace cges

#pragma once

#include <cstddef>
#include <functional>

namespace wavesel {

/// Number of workers to use for a request of `threads` (0 means all hardware threads).
unsigned resolve_threads(unsigned threads);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index runs exactly
/// once; callers write results into index-addressed slots so the outcome never depends on
/// scheduling. The exception thrown by the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace wavesel

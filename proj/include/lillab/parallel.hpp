#pragma once

#include <cstddef>
#include <functional>

namespace lillab {

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware).
// Indices are handed out dynamically; body must only write to slot i.
// The first exception is rethrown on the caller.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

std::size_t resolve_threads(std::size_t requested);

}  // namespace lillab

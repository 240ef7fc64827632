#pragma once

#include <cstddef>
#include <functional>

namespace twinex {

/// Runs fn(0) .. fn(n-1) on at most `threads` workers (0 = hardware
/// concurrency). Each index must write only its own output slot. If any call
/// throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace twinex

#pragma once

#include <cstddef>
#include <functional>

namespace bubblegap {

// Worker count from BUBBLEGAP_WORKERS, else the hardware concurrency.
int worker_count();

// Calls fn(i) for i in [0, n). Each index must write only its own output
// slot. The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bubblegap

#pragma once

#include <cstddef>
#include <functional>

namespace torsionlab {

// Worker count: TORSIONLAB_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n).  Each index must write only its own output
// slot; reductions happen afterwards in index order, so results do not depend
// on the thread count.  The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace torsionlab

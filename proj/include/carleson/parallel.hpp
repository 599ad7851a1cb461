#pragma once

#include <cstddef>
#include <functional>

namespace carleson {

/// Worker count for parallel_for. 0 restores the default (CARLESON_LAB_THREADS,
/// else hardware concurrency).
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Each index must write only its own output slot,
/// so results do not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace carleson

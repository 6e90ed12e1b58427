#pragma once

#include <cstddef>
#include <functional>

namespace nctheta {

/// Worker count: NCTHETA_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned thread_count();

/// Calls fn(i) for i in [0, n). Each index is visited exactly once; callers write into
/// preallocated slots so results do not depend on the schedule. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nctheta
